"""Numerical core: monomial bases, Lie maps, fitting and benchmarks."""
