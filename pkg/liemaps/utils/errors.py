"""Exceptions raised by liemaps.

CLI exit codes follow the class: `FormatError` exits with 1,
`NumericError` and its subclasses exit with 2.
"""
from __future__ import annotations

from typing import Any


class LieMapsError(Exception):
    """Base class for liemaps errors."""


class FormatError(LieMapsError, ValueError):
    """Malformed input file, argument or dataset."""

    def __init__(self, message: str, *, location: str | None = None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class NumericError(LieMapsError, ArithmeticError):
    """Numerical failure during map building or propagation."""


class ConvergenceError(NumericError):
    """Exponential series did not reach its residual tolerance."""

    def __init__(self, message: str, *, residual: float):
        self.residual = residual
        super().__init__(f"{message} (residual {residual:.3e})")


class DivergenceError(NumericError):
    """State became non-finite.

    Args:
        last_index: index of the last finite state
        partial: whatever was computed up to `last_index`
    """

    def __init__(self, message: str, *, last_index: int, partial: Any = None):
        self.last_index = last_index
        self.partial = partial
        super().__init__(f"{message} (last valid index {last_index})")
