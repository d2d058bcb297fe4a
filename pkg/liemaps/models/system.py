"""Polynomial ODE system model."""
from __future__ import annotations

import pprint
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from liemaps.core.polybasis import basis, basis_dim
from liemaps.utils import FormatError
from .utils import JsonSerializable, frozen_array


@dataclass(eq=False)
class PolynomialSystem(JsonSerializable):
    """Autonomous right-hand side x' = sum_d P_d x^[d].

    `coeffs[d]` is the n x basis_dim(n, d) coefficient matrix of the degree-d
    monomials, columns in basis order. Degrees above `max_deg` are zero.
    """

    n: int
    coeffs: list[np.ndarray]

    def __post_init__(self):
        if self.n < 1:
            raise FormatError(f"State dimension must be positive, got {self.n}")
        if len(self.coeffs) == 0:
            self.coeffs = [np.zeros((self.n, 1))]
        checked = []
        for degree, matrix in enumerate(self.coeffs):
            matrix = frozen_array(matrix)
            expected = (self.n, basis_dim(self.n, degree))
            if matrix.shape != expected:
                raise FormatError(
                    f"Degree {degree} coefficients have shape {matrix.shape}, "
                    f"expected {expected}"
                )
            if not np.all(np.isfinite(matrix)):
                raise FormatError(f"Non-finite coefficient at degree {degree}")
            checked.append(matrix)
        self.coeffs = checked

    @property
    def max_deg(self) -> int:
        """Highest stored degree."""
        return len(self.coeffs) - 1

    @property
    def has_constant_term(self) -> bool:
        """True when P_0 is nonzero."""
        return bool(np.any(self.coeffs[0]))

    def block(self, degree: int) -> np.ndarray:
        """Coefficient matrix of `degree`, zeros beyond `max_deg`."""
        if degree < 0:
            raise ValueError(f"Degree must be non-negative, got {degree}")
        if degree > self.max_deg:
            return np.zeros((self.n, basis_dim(self.n, degree)))
        return self.coeffs[degree]

    def coefficient(self, target: int, exponents: Sequence[int]) -> float:
        """Coefficient of x^exponents in the equation of state `target`."""
        degree = sum(exponents)
        column = basis(self.n, degree).index_of(exponents)
        return float(self.block(degree)[target, column])

    def terms(self) -> list[tuple[int, tuple[int, ...], float]]:
        """Nonzero terms as (target, exponents, coeff), degree by degree."""
        result = []
        for degree, matrix in enumerate(self.coeffs):
            entries = basis(self.n, degree).entries
            for target, column in zip(*np.nonzero(matrix)):
                result.append(
                    (int(target), entries[column].exponents, float(matrix[target, column]))
                )
        return sorted(result, key=lambda term: (sum(term[1]), term[0]))

    @classmethod
    def zeros(cls, n: int, max_deg: int = 1) -> PolynomialSystem:
        """System with F = 0."""
        return cls(n=n, coeffs=[np.zeros((n, basis_dim(n, d))) for d in range(max_deg + 1)])

    @classmethod
    def linear(cls, matrix) -> PolynomialSystem:
        """System x' = A x."""
        matrix = np.asarray(matrix, dtype=float)
        n = matrix.shape[0]
        return cls(n=n, coeffs=[np.zeros((n, 1)), matrix])

    @classmethod
    def from_terms(
        cls, n: int, terms: Iterable[tuple[int, Sequence[int], float]]
    ) -> PolynomialSystem:
        """Builds a system from (target, exponents, coeff) triples.

        Repeated monomials for the same target are summed.
        """
        terms = [(int(t), tuple(int(a) for a in e), float(c)) for t, e, c in terms]
        max_deg = max((sum(exponents) for _, exponents, _ in terms), default=0)
        coeffs = [np.zeros((n, basis_dim(n, d))) for d in range(max_deg + 1)]
        for target, exponents, coeff in terms:
            if not 0 <= target < n:
                raise FormatError(f"Target {target} out of range for n={n}")
            if len(exponents) != n:
                raise FormatError(
                    f"Exponents {list(exponents)} do not have length n={n}"
                )
            degree = sum(exponents)
            coeffs[degree][target, basis(n, degree).index_of(exponents)] += coeff
        return cls(n=n, coeffs=coeffs)

    @classmethod
    def from_dict(cls, dictionary: dict) -> PolynomialSystem:
        """Transform dictionary to PolynomialSystem.

        Args:
            dictionary: {"n": int, "terms": [{"target", "exponents", "coeff"}]}

        Return: PolynomialSystem
        """
        if not isinstance(dictionary, dict):
            raise FormatError("Expected a json object", location="system")
        n = dictionary.get("n")
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise FormatError(f"Invalid state dimension {n!r}", location="n")
        raw_terms = dictionary.get("terms")
        if not isinstance(raw_terms, list):
            raise FormatError("Missing list of terms", location="terms")
        terms = []
        for i, term in enumerate(raw_terms):
            location = f"terms[{i}]"
            if not isinstance(term, dict):
                raise FormatError("Expected a json object", location=location)
            for key in ("target", "exponents", "coeff"):
                if key not in term:
                    raise FormatError(f"Missing field '{key}'", location=location)
            target, exponents, coeff = term["target"], term["exponents"], term["coeff"]
            if not isinstance(target, int) or not 0 <= target < n:
                raise FormatError(f"Invalid target {target!r}", location=f"{location}.target")
            if (
                not isinstance(exponents, list)
                or len(exponents) != n
                or any(not isinstance(a, int) or a < 0 for a in exponents)
            ):
                raise FormatError(
                    f"Expected {n} non-negative integers, got {exponents!r}",
                    location=f"{location}.exponents",
                )
            if not isinstance(coeff, (int, float)) or not np.isfinite(coeff):
                raise FormatError(f"Invalid coefficient {coeff!r}", location=f"{location}.coeff")
            terms.append((target, exponents, coeff))
        return cls.from_terms(n, terms)

    def to_dict(self) -> dict:
        """Converts system to dict."""
        return {
            "n": self.n,
            "terms": [
                {"target": target, "exponents": list(exponents), "coeff": coeff}
                for target, exponents, coeff in self.terms()
            ],
        }

    def __eq__(self, other: "PolynomialSystem"):
        if not isinstance(other, PolynomialSystem) or self.n != other.n:
            return False
        degrees = max(self.max_deg, other.max_deg) + 1
        return all(
            np.array_equal(self.block(d), other.block(d)) for d in range(degrees)
        )

    def __repr__(self):
        return pprint.pformat(self.to_dict(), indent=4)

    def __str__(self):
        return f"PolynomialSystem(n={self.n} | max_deg={self.max_deg})"
