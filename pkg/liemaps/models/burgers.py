"""Burgers benchmark models."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from liemaps.core.polybasis import StackedBasis, stacked_basis
from liemaps.utils import FormatError
from .utils import JsonSerializable, frozen_array

PERIOD = 2 * math.pi


@dataclass
class BurgersConfig(JsonSerializable):
    """Viscosity, periodic mesh on [0, 2pi) and stepping of one Burgers run."""

    # pylint: disable=too-many-instance-attributes
    nu: float
    nx: int
    dt: float
    t_end: float
    map_order: int = 3
    halo: int = 2
    expansion_order: int = 2

    def __post_init__(self):
        if self.nx < 8:
            raise FormatError(f"nx must be at least 8, got {self.nx}")
        if self.dt <= 0:
            raise FormatError(f"dt must be positive, got {self.dt}")
        if self.t_end < 0:
            raise FormatError(f"t_end must be non-negative, got {self.t_end}")
        if self.nu < 0:
            raise FormatError(f"nu must be non-negative, got {self.nu}")
        if self.halo < 1:
            raise FormatError(f"halo must be at least 1, got {self.halo}")
        if self.map_order < 2:
            raise FormatError(f"map_order must be at least 2, got {self.map_order}")
        if self.expansion_order < 1:
            raise FormatError(
                f"expansion_order must be at least 1, got {self.expansion_order}"
            )

    @property
    def dx(self) -> float:
        """Uniform spacing 2pi / nx."""
        return PERIOD / self.nx

    @property
    def steps(self) -> int:
        """round(t_end / dt)."""
        return int(round(self.t_end / self.dt))

    @property
    def window_dim(self) -> int:
        """Stencil window state size 2r spacings + (2r + 1) values."""
        return 4 * self.halo + 1

    @classmethod
    def from_dict(cls, dictionary: dict):
        """Transform dictionary to BurgersConfig.

        Args:
            dictionary: dict object

        Return: BurgersConfig
        """
        return BurgersConfig(**dictionary)


@dataclass(eq=False)
class Field(JsonSerializable):
    """Node positions `x` (unwrapped, increasing) and values `u` at time `t`."""

    x: np.ndarray
    u: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.x = frozen_array(self.x)
        self.u = frozen_array(self.u)
        if self.x.ndim != 1 or self.x.shape != self.u.shape:
            raise FormatError(
                f"Positions {self.x.shape} and values {self.u.shape} do not match"
            )
        if not np.all(np.isfinite(self.u)) or not np.all(np.isfinite(self.x)):
            raise FormatError("Field has non-finite entries")
        if np.any(np.diff(self.x) <= 0):
            raise FormatError("Field positions are not strictly increasing")
        self.t = float(self.t)

    @property
    def nx(self) -> int:
        """Node count."""
        return self.x.shape[0]

    @property
    def wrapped_x(self) -> np.ndarray:
        """Positions folded into [0, 2pi)."""
        return np.mod(self.x, PERIOD)

    def spacings(self) -> np.ndarray:
        """x_{i+1} - x_i with the last spacing closing the period."""
        return np.diff(np.append(self.x, self.x[0] + PERIOD))

    @classmethod
    def uniform(cls, nx: int, u: np.ndarray, t: float = 0.0) -> Field:
        """Field on the mesh x_i = i 2pi / nx."""
        return cls(x=np.arange(nx) * (PERIOD / nx), u=u, t=t)

    def __eq__(self, other: "Field"):
        return (
            isinstance(other, Field)
            and self.t == other.t
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.u, other.u)
        )

    def __str__(self):
        return f"Field(nx={self.nx} | t={self.t})"


@dataclass(eq=False)
class StencilMap(JsonSerializable):
    """Center-node rows of a window map.

    Row 0 is the center displacement over `dt`, row 1 the new center value.
    Columns follow the stacked basis of the window state
    (s_{-r}, ..., s_{r-1}, u_{-r}, ..., u_r).
    """

    weights: np.ndarray
    halo: int
    order: int
    dt: float
    dx: float

    def __post_init__(self):
        self.weights = frozen_array(self.weights)
        expected = (2, self.basis.size)
        if self.weights.shape != expected:
            raise FormatError(
                f"Stencil weights have shape {self.weights.shape}, expected {expected}"
            )
        if not np.all(np.isfinite(self.weights)):
            raise FormatError("Non-finite stencil weights")

    @property
    def window_dim(self) -> int:
        """4r + 1."""
        return 4 * self.halo + 1

    @property
    def basis(self) -> StackedBasis:
        """Stacked basis over the window state."""
        return stacked_basis(self.window_dim, self.order)


@dataclass
class BenchmarkRow(JsonSerializable):
    """One row of the Burgers comparison table."""

    # pylint: disable=too-many-instance-attributes
    method: str
    time_step: float
    mesh: str
    steps: int
    elapsed_seconds: float
    mse_final: float | None
    elapsed_seconds_parallel: float | None = None
    diverged_at_step: int | None = None

    def to_dict(self) -> dict:
        """Converts row to dict, keeping a null `mse_final`."""
        result = super().to_dict()
        result["mse_final"] = self.mse_final
        return result
