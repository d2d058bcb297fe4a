"""Truncated matrix Lie maps of autonomous polynomial ODE systems.

The stacked monomial vector Z = (1, X, X^[2], ..., X^[K]) of a solution obeys
Z' = D Z up to truncation at degree K, where D is assembled from induced
blocks obtained by the product rule. The map over dt is the degree-1 rows of
exp(D dt).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from liemaps.core.polybasis import StackedBasis, basis, stacked_basis
from liemaps.models import PolynomialMap, PolynomialSystem, TrajectoryDataset
from liemaps.utils import ConvergenceError, DivergenceError, logger

BACKENDS = ("expm", "rk4")
EXPM_TOLERANCE = 1e-13
RK4_SUBSTEPS = 16
MAX_TAYLOR_TERMS = 60


@dataclass(frozen=True)
class GeneratorMatrix:
    """Stacked N x N matrix D over `basis` with Z' = D Z."""

    matrix: np.ndarray
    basis: StackedBasis
    truncated: bool = field(default=False, compare=False)

    def block(self, i: int, j: int) -> np.ndarray:
        """Sub-block mapping degree-j monomials into degree-i derivatives."""
        return self.matrix[self.basis.block_slice(i), self.basis.block_slice(j)]


def induced_block(system: PolynomialSystem, i: int, j: int) -> np.ndarray:
    """Time derivative of the degree-i monomials in terms of degree-j monomials.

    d/dt x^a = sum_m a_m x^(a - e_m) x_m', so row a receives a_m P_p[m, b] in
    column a - e_m + b for every degree-p term with p = j - i + 1.

    Args:
        system: polynomial right-hand side
        i: row degree, at least 1
        j: column degree

    Returns:
        matrix of shape basis_dim(n, i) x basis_dim(n, j)
    """
    if i < 1 or j < 0:
        raise ValueError(f"Invalid induced block ({i}, {j})")
    rows, cols = basis(system.n, i), basis(system.n, j)
    result = np.zeros((len(rows), len(cols)))
    source_degree = j - i + 1
    if source_degree < 0 or source_degree > system.max_deg:
        return result
    coeffs = system.block(source_degree)
    if not np.any(coeffs):
        return result
    source = basis(system.n, source_degree)
    terms = [
        [(source.entries[c].exponents, coeffs[m, c]) for c in np.flatnonzero(coeffs[m])]
        for m in range(system.n)
    ]
    for row, alpha in enumerate(rows.entries):
        for m, power in enumerate(alpha.exponents):
            if power == 0 or not terms[m]:
                continue
            lowered = list(alpha.exponents)
            lowered[m] -= 1
            for beta, coeff in terms[m]:
                gamma = tuple(a + b for a, b in zip(lowered, beta))
                result[row, cols.index_of(gamma)] += power * coeff
    return result


def generator(system: PolynomialSystem, order: int) -> GeneratorMatrix:
    """Assembles D over the stacked basis of degrees 0..order.

    Column degrees run from i - 1 so constant terms are kept; contributions
    to degrees above `order` are dropped.
    """
    if order < 1:
        raise ValueError(f"Order must be at least 1, got {order}")
    columns = stacked_basis(system.n, order)
    matrix = np.zeros((columns.size, columns.size))
    for i in range(1, order + 1):
        for j in range(i - 1, min(order, i - 1 + system.max_deg) + 1):
            matrix[columns.block_slice(i), columns.block_slice(j)] = induced_block(
                system, i, j
            )
    truncated = any(np.any(system.block(p)) for p in range(2, system.max_deg + 1))
    if system.has_constant_term:
        logger.info(
            "Constant term present: degree-%d monomials feeding degree-%d rows are dropped",
            order + 1,
            order,
        )
    matrix.setflags(write=False)
    return GeneratorMatrix(matrix=matrix, basis=columns, truncated=truncated)


def taylor_expm(matrix: np.ndarray, tol: float = EXPM_TOLERANCE) -> tuple[np.ndarray, float]:
    """Scaling-and-squaring truncated Taylor exponential.

    The matrix is scaled by 2^-s until its 1-norm is at most 1/2, the Taylor
    series is summed until the last term is below `tol` relative to the sum,
    and the result is squared s times.

    Returns:
        (exp(matrix), relative size of the last Taylor term)

    Raises:
        ConvergenceError: the series did not reach `tol`
    """
    size = matrix.shape[0]
    norm = np.linalg.norm(matrix, 1) if size else 0.0
    if not np.isfinite(norm):
        raise ConvergenceError("Generator has non-finite entries", residual=math.inf)
    squarings = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0.5 else 0
    scaled = matrix / 2.0**squarings

    total = np.identity(size)
    term = np.identity(size)
    residual = 0.0 if norm == 0 else math.inf
    for k in range(1, MAX_TAYLOR_TERMS + 1):
        if residual <= tol:
            break
        term = scaled @ term / k
        total = total + term
        residual = np.linalg.norm(term, 1) / max(np.linalg.norm(total, 1), 1.0)
    if not residual <= tol:
        raise ConvergenceError(
            f"Taylor series not converged after {MAX_TAYLOR_TERMS} terms",
            residual=residual,
        )
    for _ in range(squarings):
        total = total @ total
    return total, residual


def rk4_propagator(matrix: np.ndarray, dt: float, substeps: int = RK4_SUBSTEPS) -> np.ndarray:
    """Integrates M' = D M, M(0) = I over dt with `substeps` classical RK4 steps."""
    h = dt / substeps
    current = np.identity(matrix.shape[0])
    for _ in range(substeps):
        k1 = matrix @ current
        k2 = matrix @ (current + 0.5 * h * k1)
        k3 = matrix @ (current + 0.5 * h * k2)
        k4 = matrix @ (current + h * k3)
        current = current + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return current


def propagator(
    system: PolynomialSystem,
    dt: float,
    order: int,
    backend: str = "expm",
    substeps: int = RK4_SUBSTEPS,
    tol: float = EXPM_TOLERANCE,
) -> tuple[np.ndarray, float | None]:
    """Full stacked propagator M(dt) and the backend residual (None for rk4)."""
    return _integrate(generator(system, order).matrix, dt, backend, substeps, tol)


def _integrate(matrix, dt, backend, substeps, tol):
    if dt <= 0:
        raise ValueError(f"Time step must be positive, got {dt}")
    if backend not in BACKENDS:
        raise ValueError(f"Unknown backend {backend!r}, expected one of {BACKENDS}")
    if backend == "rk4":
        if substeps < 1:
            raise ValueError(f"Substeps must be positive, got {substeps}")
        return rk4_propagator(matrix, dt, substeps), None
    return taylor_expm(matrix * dt, tol)


def build_map(
    system: PolynomialSystem,
    dt: float,
    order: int,
    backend: str = "expm",
    substeps: int = RK4_SUBSTEPS,
    tol: float = EXPM_TOLERANCE,
) -> PolynomialMap:
    """Builds the order-K Lie map of `system` over `dt`.

    Args:
        system: autonomous polynomial right-hand side
        dt: time step
        order: truncation order K >= 1
        backend: "expm" (scaling and squaring) or "rk4" (substepped RK4)
        substeps: RK4 substeps per dt
        tol: Taylor residual tolerance of the expm backend

    Returns:
        PolynomialMap with W_d taken from the degree-1 rows of M(dt)
    """
    lifted = generator(system, order)
    full, residual = _integrate(lifted.matrix, dt, backend, substeps, tol)
    columns = lifted.basis
    rows = full[columns.block_slice(1)]
    metadata = {
        "backend": backend,
        "residual": residual,
        "substeps": substeps if backend == "rk4" else None,
        "constant_term": system.has_constant_term,
        "truncated": lifted.truncated,
    }
    logger.info(
        "Built order-%d map: n=%d, N=%d, dt=%g, backend=%s, residual=%s",
        order,
        system.n,
        columns.size,
        dt,
        backend,
        "n/a" if residual is None else f"{residual:.2e}",
    )
    return PolynomialMap.from_stacked(rows, system.n, order, dt, metadata=metadata)


def apply(polymap: PolynomialMap, states: np.ndarray) -> np.ndarray:
    """Y = sum_d W_d X^[d] for one state (n,) or a batch (b, n), order preserved.

    Raises:
        ValueError: wrong dimension or non-finite input
        DivergenceError: non-finite output
    """
    states = np.asarray(states, dtype=float)
    if states.shape[-1] != polymap.n:
        raise ValueError(f"Expected states of dimension {polymap.n}, got {states.shape[-1]}")
    if not np.all(np.isfinite(states)):
        raise ValueError("Non-finite state passed to apply")
    with np.errstate(over="ignore", invalid="ignore"):
        result = polymap.basis.evaluate(states) @ polymap.stacked_weights.T
    if not np.all(np.isfinite(result)):
        raise DivergenceError("Map output is non-finite", last_index=0, partial=states)
    return result


def iterate(polymap: PolynomialMap, x0: np.ndarray, steps: int) -> TrajectoryDataset:
    """Applies the map `steps` times starting from x0.

    Raises:
        DivergenceError: a state became non-finite; `partial` holds the
            trajectory up to `last_index`
    """
    if steps < 0:
        raise ValueError(f"Steps must be non-negative, got {steps}")
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if x0.shape[0] != polymap.n:
        raise ValueError(f"Expected x0 of dimension {polymap.n}, got {x0.shape[0]}")
    if not np.all(np.isfinite(x0)):
        raise ValueError("Non-finite initial state")
    columns, weights = polymap.basis, polymap.stacked_weights
    states = np.empty((steps + 1, polymap.n))
    states[0] = x0
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(steps):
            states[k + 1] = weights @ columns.monomial_columns(states[k])
            if not np.all(np.isfinite(states[k + 1])):
                logger.warning("Map iteration diverged at step %d", k + 1)
                raise DivergenceError(
                    f"Map iteration diverged at step {k + 1}",
                    last_index=k,
                    partial=TrajectoryDataset(dt=polymap.dt, states=states[: k + 1]),
                )
    return TrajectoryDataset(dt=polymap.dt, states=states)
