"""Polynomial map model."""
from __future__ import annotations

import pprint
from dataclasses import dataclass
from typing import Any

import numpy as np

from liemaps.core.polybasis import StackedBasis, basis_dim, stacked_basis
from liemaps.utils import FormatError
from .utils import JsonSerializable, frozen_array, plain

BASIS_ORDERING = "grlex-desc"


@dataclass(eq=False)
class PolynomialMap(JsonSerializable):
    """One-step propagator Y = W_0 + W_1 X + ... + W_K X^[K] over `dt`."""

    n: int
    order: int
    dt: float
    weights: list[np.ndarray]
    metadata: dict[str, Any] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise FormatError(f"State dimension must be positive, got {self.n}")
        if self.order < 0:
            raise FormatError(f"Order must be non-negative, got {self.order}")
        if not np.isfinite(self.dt) or self.dt <= 0:
            raise FormatError(f"Time step must be positive, got {self.dt}")
        if len(self.weights) != self.order + 1:
            raise FormatError(
                f"Expected {self.order + 1} weight blocks, got {len(self.weights)}"
            )
        checked = []
        for degree, matrix in enumerate(self.weights):
            matrix = frozen_array(matrix)
            expected = (self.n, basis_dim(self.n, degree))
            if matrix.shape != expected:
                raise FormatError(
                    f"W_{degree} has shape {matrix.shape}, expected {expected}"
                )
            if not np.all(np.isfinite(matrix)):
                raise FormatError(f"Non-finite entry in W_{degree}")
            checked.append(matrix)
        self.weights = checked
        self.dt = float(self.dt)
        self._stacked = frozen_array(np.hstack(checked))

    @property
    def basis(self) -> StackedBasis:
        """Stacked monomial basis the weights act on."""
        return stacked_basis(self.n, self.order)

    @property
    def stacked_weights(self) -> np.ndarray:
        """[W_0 | W_1 | ... | W_K], shape (n, N)."""
        return self._stacked

    @classmethod
    def from_stacked(
        cls, stacked: np.ndarray, n: int, order: int, dt: float, metadata=None
    ) -> PolynomialMap:
        """Splits an (n, N) matrix into per-degree weight blocks."""
        columns = stacked_basis(n, order)
        weights = [stacked[:, columns.block_slice(d)] for d in range(order + 1)]
        return cls(n=n, order=order, dt=dt, weights=weights, metadata=metadata)

    @classmethod
    def identity(cls, n: int, order: int, dt: float) -> PolynomialMap:
        """Map with W_1 = I and every other block zero."""
        weights = [np.zeros((n, basis_dim(n, d))) for d in range(order + 1)]
        if order >= 1:
            weights[1] = np.eye(n)
        return cls(n=n, order=order, dt=dt, weights=weights)

    @classmethod
    def from_dict(cls, dictionary: dict) -> PolynomialMap:
        """Transform dictionary to PolynomialMap.

        Args:
            dictionary: {"n", "order", "dt", "basis", "weights", "metadata"}

        Return: PolynomialMap
        """
        if not isinstance(dictionary, dict):
            raise FormatError("Expected a json object", location="map")
        for key in ("n", "order", "dt", "weights"):
            if key not in dictionary:
                raise FormatError(f"Missing field '{key}'", location="map")
        n, order, dt = dictionary["n"], dictionary["order"], dictionary["dt"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise FormatError(f"Invalid state dimension {n!r}", location="n")
        if not isinstance(order, int) or isinstance(order, bool) or order < 0:
            raise FormatError(f"Invalid order {order!r}", location="order")
        if not isinstance(dt, (int, float)) or isinstance(dt, bool) or dt <= 0:
            raise FormatError(f"Invalid time step {dt!r}", location="dt")
        ordering = dictionary.get("basis", BASIS_ORDERING)
        if ordering != BASIS_ORDERING:
            raise FormatError(
                f"Unsupported basis ordering {ordering!r}", location="basis"
            )

        blocks: dict[int, np.ndarray] = {}
        raw_weights = dictionary["weights"]
        if not isinstance(raw_weights, list):
            raise FormatError("Expected a list", location="weights")
        for i, block in enumerate(raw_weights):
            location = f"weights[{i}]"
            if not isinstance(block, dict):
                raise FormatError("Expected a json object", location=location)
            for key in ("degree", "rows", "cols", "data"):
                if key not in block:
                    raise FormatError(f"Missing field '{key}'", location=location)
            degree = block["degree"]
            if (
                not isinstance(degree, int)
                or isinstance(degree, bool)
                or not 0 <= degree <= order
            ):
                raise FormatError(f"Invalid degree {degree!r}", location=f"{location}.degree")
            if degree in blocks:
                raise FormatError(f"Duplicate degree {degree}", location=f"{location}.degree")
            shape = (n, basis_dim(n, degree))
            if (block["rows"], block["cols"]) != shape:
                raise FormatError(
                    f"Declared shape ({block['rows']}, {block['cols']}) != {shape}",
                    location=location,
                )
            try:
                data = np.asarray(block["data"], dtype=float).reshape(shape)
            except (TypeError, ValueError) as err:
                raise FormatError(str(err), location=f"{location}.data") from err
            blocks[degree] = data
        missing = sorted(set(range(order + 1)) - set(blocks))
        if missing:
            raise FormatError(f"Missing weight degrees {missing}", location="weights")
        return cls(
            n=n,
            order=order,
            dt=float(dt),
            weights=[blocks[d] for d in range(order + 1)],
            metadata=dictionary.get("metadata"),
        )

    def to_dict(self) -> dict:
        """Converts map to dict."""
        result = {
            "n": self.n,
            "order": self.order,
            "dt": self.dt,
            "basis": BASIS_ORDERING,
            "weights": [
                {
                    "degree": degree,
                    "rows": matrix.shape[0],
                    "cols": matrix.shape[1],
                    "data": matrix.ravel().tolist(),
                }
                for degree, matrix in enumerate(self.weights)
            ],
        }
        if self.metadata is not None:
            result["metadata"] = plain(self.metadata)
        return result

    def __eq__(self, other: "PolynomialMap"):
        return (
            isinstance(other, PolynomialMap)
            and self.n == other.n
            and self.order == other.order
            and self.dt == other.dt
            and all(np.array_equal(a, b) for a, b in zip(self.weights, other.weights))
        )

    def __repr__(self):
        return pprint.pformat(self.to_dict(), indent=4)

    def __str__(self):
        return f"PolynomialMap(n={self.n} | order={self.order} | dt={self.dt})"
