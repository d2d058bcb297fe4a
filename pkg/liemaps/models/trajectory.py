"""Trajectory and fit report models."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from liemaps.utils import FormatError
from .utils import JsonSerializable, frozen_array, new_list


@dataclass(eq=False)
class TrajectoryDataset(JsonSerializable):
    """States X(t0), X(t0 + dt), ..., X(t0 + m dt), one row per sample."""

    dt: float
    states: np.ndarray
    t0: float = 0.0

    def __post_init__(self):
        states = frozen_array(self.states)
        if states.ndim == 1:
            states = frozen_array(states.reshape(1, -1))
        if states.ndim != 2 or states.shape[0] == 0 or states.shape[1] == 0:
            raise FormatError(f"Expected a (samples, n) array, got shape {states.shape}")
        if not np.all(np.isfinite(states)):
            raise FormatError("Trajectory has non-finite states")
        if not np.isfinite(self.dt) or self.dt <= 0:
            raise FormatError(f"Time step must be positive, got {self.dt}")
        self.states = states
        self.dt = float(self.dt)
        self.t0 = float(self.t0)

    @property
    def n(self) -> int:
        """State dimension."""
        return self.states.shape[1]

    @property
    def steps(self) -> int:
        """Number of steps m (samples minus one)."""
        return self.states.shape[0] - 1

    @property
    def times(self) -> np.ndarray:
        """Sample times t0 + i dt."""
        return self.t0 + self.dt * np.arange(self.states.shape[0])

    def pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """Consecutive (X_i, X_{i+1}) pairs as two (m, n) arrays.

        Raises:
            FormatError: fewer than two samples
        """
        if self.steps < 1:
            raise FormatError(
                f"At least 2 samples are needed, got {self.states.shape[0]}"
            )
        return self.states[:-1], self.states[1:]

    def __len__(self):
        return self.states.shape[0]

    def __eq__(self, other: "TrajectoryDataset"):
        return (
            isinstance(other, TrajectoryDataset)
            and self.dt == other.dt
            and self.t0 == other.t0
            and np.array_equal(self.states, other.states)
        )

    def __str__(self):
        return f"TrajectoryDataset(n={self.n} | samples={len(self)} | dt={self.dt})"


@dataclass
class FitReport(JsonSerializable):
    """Summary of a least-squares weight fit."""

    # pylint: disable=too-many-instance-attributes
    mse: float
    weight_norms: list[float] = new_list()
    condition: float | None = None
    ridge: float = 0.0
    rank: int | None = None
    rank_deficient: bool = False
    samples: int | None = None
    method: str = "lstsq"
    iterations: int | None = None
    converged: bool | None = None

    @classmethod
    def from_dict(cls, dictionary: dict):
        """Transform dictionary to FitReport.

        Args:
            dictionary: dict object

        Return: FitReport
        """
        return FitReport(**dictionary)
