"""Tests for numerical core."""
