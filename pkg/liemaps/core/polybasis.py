"""Multi-indices, reduced Kronecker powers and stacked monomial bases.

Degree-k monomials in n variables are ordered graded-lexicographic descending
on the exponent vector, with earlier variables dominating:

    basis(2, 2) -> (2,0), (1,1), (0,2)
    basis(2, 3) -> (3,0), (2,1), (1,2), (0,3)

Every weight matrix stored or serialized by this package commits to this order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence, Tuple, Union

import numpy as np

INDEX_LIMIT: int = int(np.iinfo(np.intp).max)


@dataclass(frozen=True)
class MultiIndex:
    """Exponent vector (a_1, ..., a_n) of the monomial x_1^a_1 ... x_n^a_n."""

    exponents: Tuple[int, ...]

    def __post_init__(self):
        exponents = tuple(int(a) for a in self.exponents)
        if any(a < 0 for a in exponents):
            raise ValueError(f"Negative exponent in multi-index {exponents}")
        object.__setattr__(self, "exponents", exponents)

    @property
    def degree(self) -> int:
        """Exponent sum."""
        return sum(self.exponents)

    @property
    def dimension(self) -> int:
        """Number of variables."""
        return len(self.exponents)

    def __len__(self):
        return len(self.exponents)

    def __iter__(self):
        return iter(self.exponents)

    def __getitem__(self, item):
        return self.exponents[item]

    def __str__(self):
        return str(self.exponents)


MultiIndexLike = Union[MultiIndex, Sequence[int]]


def _as_exponents(alpha: MultiIndexLike) -> Tuple[int, ...]:
    if isinstance(alpha, MultiIndex):
        return alpha.exponents
    return tuple(int(a) for a in alpha)


def _graded_lex(n: int, k: int) -> Iterator[Tuple[int, ...]]:
    if n == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _graded_lex(n - 1, k - first):
            yield (first,) + rest


@dataclass(frozen=True)
class MonomialBasis:
    """All degree-`degree` multi-indices of `n` variables, in basis order."""

    n: int
    degree: int
    entries: Tuple[MultiIndex, ...]
    exponents: np.ndarray = field(init=False, repr=False, compare=False)
    _positions: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        exponents = np.array(
            [entry.exponents for entry in self.entries], dtype=np.int64
        ).reshape(len(self.entries), self.n)
        exponents.setflags(write=False)
        object.__setattr__(self, "exponents", exponents)
        object.__setattr__(
            self,
            "_positions",
            {entry.exponents: i for i, entry in enumerate(self.entries)},
        )

    def __len__(self):
        return len(self.entries)

    def index_of(self, alpha: MultiIndexLike) -> int:
        """Position of `alpha` in this basis.

        Raises:
            ValueError: dimension or degree of `alpha` does not match
        """
        exponents = _as_exponents(alpha)
        if len(exponents) != self.n:
            raise ValueError(
                f"Multi-index {exponents} has dimension {len(exponents)}, "
                f"basis has {self.n}"
            )
        if sum(exponents) != self.degree:
            raise ValueError(
                f"Multi-index {exponents} has degree {sum(exponents)}, "
                f"basis has {self.degree}"
            )
        return self._positions[exponents]


def basis_dim(n: int, k: int) -> int:
    """Number of degree-k monomials in n variables, C(n+k-1, k).

    Raises:
        ValueError: n < 1 or k < 0
        OverflowError: the count does not fit a platform index
    """
    if n < 1:
        raise ValueError(f"State dimension must be positive, got {n}")
    if k < 0:
        raise ValueError(f"Degree must be non-negative, got {k}")
    count = math.comb(n + k - 1, k)
    if count > INDEX_LIMIT:
        raise OverflowError(f"basis_dim({n}, {k}) = {count} exceeds {INDEX_LIMIT}")
    return count


def stacked_dim(n: int, max_degree: int) -> int:
    """Size of the stacked basis of degrees 0..max_degree."""
    total = sum(basis_dim(n, d) for d in range(max_degree + 1))
    if total > INDEX_LIMIT:
        raise OverflowError(f"stacked_dim({n}, {max_degree}) exceeds {INDEX_LIMIT}")
    return total


@lru_cache(maxsize=None)
def basis(n: int, k: int) -> MonomialBasis:
    """Degree-k monomial basis of an n-vector in graded-lex descending order."""
    basis_dim(n, k)
    entries = tuple(MultiIndex(alpha) for alpha in _graded_lex(n, k))
    return MonomialBasis(n=n, degree=k, entries=entries)


def index_of(monomials: MonomialBasis, alpha: MultiIndexLike) -> int:
    """Zero-based position of `alpha` in `monomials`."""
    return monomials.index_of(alpha)


@dataclass(frozen=True)
class StackedBasis:
    """Concatenation of basis(n, 0), ..., basis(n, max_degree).

    `offsets[d]` is the first global position of the degree-d block and
    `offsets[max_degree + 1]` is the total size.
    """

    n: int
    max_degree: int
    blocks: Tuple[MonomialBasis, ...]
    offsets: Tuple[int, ...]
    exponents: np.ndarray = field(init=False, repr=False, compare=False)
    _parents: Tuple[np.ndarray, ...] = field(init=False, repr=False, compare=False)
    _variables: Tuple[np.ndarray, ...] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        exponents = np.concatenate([block.exponents for block in self.blocks])
        exponents.setflags(write=False)
        object.__setattr__(self, "exponents", exponents)

        # each degree-d monomial is (degree d-1 parent) * x_v, v its first variable
        parents, variables = [np.zeros(0, dtype=np.intp)], [np.zeros(0, dtype=np.intp)]
        for degree in range(1, self.max_degree + 1):
            lower = self.blocks[degree - 1]
            block_parents, block_variables = [], []
            for entry in self.blocks[degree].entries:
                var = next(m for m, a in enumerate(entry.exponents) if a > 0)
                parent = list(entry.exponents)
                parent[var] -= 1
                block_parents.append(lower.index_of(parent))
                block_variables.append(var)
            parents.append(np.array(block_parents, dtype=np.intp))
            variables.append(np.array(block_variables, dtype=np.intp))
        object.__setattr__(self, "_parents", tuple(parents))
        object.__setattr__(self, "_variables", tuple(variables))

    @property
    def size(self) -> int:
        """Total number of stacked monomials N."""
        return self.offsets[-1]

    def __len__(self):
        return self.size

    def block_slice(self, degree: int) -> slice:
        """Global positions of the degree block."""
        return slice(self.offsets[degree], self.offsets[degree + 1])

    def position(self, alpha: MultiIndexLike) -> int:
        """Global position of `alpha` in the stacked basis."""
        exponents = _as_exponents(alpha)
        degree = sum(exponents)
        if degree > self.max_degree:
            raise ValueError(
                f"Multi-index {exponents} exceeds max degree {self.max_degree}"
            )
        return self.offsets[degree] + self.blocks[degree].index_of(exponents)

    def monomial_columns(self, states_t: np.ndarray) -> np.ndarray:
        """Evaluate every stacked monomial, variables along the first axis.

        Args:
            states_t: array of shape (n, ...)

        Returns:
            array of shape (N, ...)
        """
        states_t = np.asarray(states_t, dtype=float)
        if states_t.shape[0] != self.n:
            raise ValueError(f"Expected {self.n} variables, got {states_t.shape[0]}")
        previous = np.ones((1,) + states_t.shape[1:])
        columns = [previous]
        for degree in range(1, self.max_degree + 1):
            previous = previous[self._parents[degree]] * states_t[self._variables[degree]]
            columns.append(previous)
        return np.concatenate(columns, axis=0)

    def evaluate(self, states: np.ndarray) -> np.ndarray:
        """Stacked monomials of one state (n,) or a batch (..., n) -> (..., N)."""
        states = np.asarray(states, dtype=float)
        columns = self.monomial_columns(np.moveaxis(states, -1, 0))
        return np.moveaxis(columns, 0, -1)


@lru_cache(maxsize=None)
def stacked_basis(n: int, max_degree: int) -> StackedBasis:
    """Stacked basis of degrees 0..max_degree for an n-vector."""
    if max_degree < 0:
        raise ValueError(f"Max degree must be non-negative, got {max_degree}")
    stacked_dim(n, max_degree)
    blocks = tuple(basis(n, d) for d in range(max_degree + 1))
    offsets = [0]
    for block in blocks:
        offsets.append(offsets[-1] + len(block))
    return StackedBasis(n=n, max_degree=max_degree, blocks=blocks, offsets=tuple(offsets))


def reduced_kron(state: np.ndarray, k: int) -> np.ndarray:
    """Distinct entries of the k-th Kronecker power of `state`, in basis order.

    Works on one state (n,) or a batch (..., n).

    Raises:
        ValueError: the state has non-finite entries
    """
    state = np.asarray(state, dtype=float)
    if not np.all(np.isfinite(state)):
        raise ValueError("Non-finite state passed to reduced_kron")
    exponents = basis(state.shape[-1], k).exponents
    return np.prod(state[..., np.newaxis, :] ** exponents, axis=-1)


def stacked_monomials(state: np.ndarray, max_degree: int) -> np.ndarray:
    """reduced_kron(state, 0), ..., reduced_kron(state, max_degree) concatenated."""
    state = np.asarray(state, dtype=float)
    return stacked_basis(state.shape[-1], max_degree).evaluate(state)
