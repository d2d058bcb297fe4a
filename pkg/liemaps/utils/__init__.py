"""Utility functions and classes."""

from .utils import logger
from .errors import (
    LieMapsError,
    FormatError,
    NumericError,
    ConvergenceError,
    DivergenceError,
)
