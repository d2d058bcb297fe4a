"""Least-squares estimation of map weights from state pairs.

The map is linear in its weights, so minimizing
sum_i |X_{i+1} - sum_d W_d X_i^[d]|^2 (+ ridge |W|^2) is a linear least-squares
problem with one right-hand side per state component.
"""
from __future__ import annotations

import numpy as np
from scipy import linalg

from liemaps.core.liemap import iterate
from liemaps.core.polybasis import stacked_basis
from liemaps.models import FitReport, PolynomialMap, TrajectoryDataset
from liemaps.utils import FormatError, logger

METHODS = ("lstsq", "gradient")


def design_matrix(data: TrajectoryDataset, order: int) -> np.ndarray:
    """Stacked monomials of X_0, ..., X_{m-1}, one row per step."""
    if order < 1:
        raise ValueError(f"Order must be at least 1, got {order}")
    return stacked_basis(data.n, order).evaluate(data.states[:-1])


def _qr_solve(features, targets):
    """Pivoted QR solve; falls back to minimum-norm lstsq when rank deficient."""
    q, r, perm = linalg.qr(features, mode="economic", pivoting=True)
    diagonal = np.abs(np.diag(r))
    cutoff = diagonal[0] * max(features.shape) * np.finfo(float).eps if diagonal.size else 0
    rank = int(np.count_nonzero(diagonal > cutoff))
    if rank == features.shape[1]:
        coef = np.empty((features.shape[1], targets.shape[1]))
        coef[perm] = linalg.solve_triangular(r, q.T @ targets)
        return coef, rank, float(diagonal[0] / diagonal[-1])
    coef, _, rank, singular = linalg.lstsq(features, targets)
    condition = float(singular[0] / singular[-1]) if singular[-1] > 0 else float("inf")
    return coef, int(rank), condition


def _gradient_descent(features, targets, ridge, max_iter, tol):
    """Fixed-step gradient descent on |A c - y|^2 + ridge |c|^2 from zero."""
    gram = features.T @ features + ridge * np.identity(features.shape[1])
    rhs = features.T @ targets
    step = 1.0 / np.linalg.eigvalsh(gram)[-1]
    coef = np.zeros((features.shape[1], targets.shape[1]))
    for iteration in range(1, max_iter + 1):
        update = step * (gram @ coef - rhs)
        coef = coef - update
        if np.linalg.norm(update) <= tol * (1.0 + np.linalg.norm(coef)):
            return coef, iteration, True
    return coef, max_iter, False


def fit_pairs(
    inputs: np.ndarray,
    outputs: np.ndarray,
    order: int,
    ridge: float = 0.0,
    dt: float = 1.0,
    method: str = "lstsq",
    max_iter: int = 100000,
    tol: float = 1e-12,
) -> tuple[PolynomialMap, FitReport]:
    """Fits Y ~ sum_d W_d X^[d] from sample pairs.

    Args:
        inputs: (m, n) states X_i
        outputs: (m, n) states Y_i
        order: polynomial order K >= 1
        ridge: non-negative ridge parameter
        dt: time step recorded in the returned map
        method: "lstsq" (closed form) or "gradient" (fixed-step descent)
        max_iter: iteration cap of the gradient method
        tol: relative update size at which the gradient method stops

    Returns:
        fitted map and its report
    """
    inputs = np.asarray(inputs, dtype=float)
    outputs = np.asarray(outputs, dtype=float)
    if inputs.ndim != 2 or inputs.shape != outputs.shape:
        raise FormatError(
            f"Inputs {inputs.shape} and outputs {outputs.shape} must be equal (m, n) arrays"
        )
    if inputs.shape[0] < 1:
        raise FormatError("At least one sample pair is needed")
    if order < 1:
        raise ValueError(f"Order must be at least 1, got {order}")
    if ridge < 0:
        raise ValueError(f"Ridge must be non-negative, got {ridge}")
    if method not in METHODS:
        raise ValueError(f"Unknown method {method!r}, expected one of {METHODS}")

    n = inputs.shape[1]
    columns = stacked_basis(n, order)
    features = columns.evaluate(inputs)
    if ridge > 0:
        system = np.vstack([features, np.sqrt(ridge) * np.identity(columns.size)])
        targets = np.vstack([outputs, np.zeros((columns.size, n))])
    else:
        system, targets = features, outputs

    coef, rank, condition = _qr_solve(system, targets)
    iterations, converged = None, None
    if method == "gradient":
        coef, iterations, converged = _gradient_descent(
            features, outputs, ridge, max_iter, tol
        )
        if not converged:
            logger.warning("Gradient fit stopped after %d iterations", iterations)

    rank_deficient = rank < columns.size
    if rank_deficient:
        logger.warning(
            "Design matrix has rank %d < %d; using the minimum-norm solution",
            rank,
            columns.size,
        )
    polymap = PolynomialMap.from_stacked(coef.T, n, order, dt)
    residual = features @ coef - outputs
    report = FitReport(
        mse=float(np.mean(residual**2)),
        weight_norms=[float(np.linalg.norm(w)) for w in polymap.weights],
        condition=condition,
        ridge=float(ridge),
        rank=rank,
        rank_deficient=rank_deficient,
        samples=int(inputs.shape[0]),
        method=method,
        iterations=iterations,
        converged=converged,
    )
    logger.info(
        "Fitted order-%d map on %d pairs: mse=%.3e, rank=%d, condition=%.3e",
        order,
        report.samples,
        report.mse,
        rank,
        condition,
    )
    return polymap, report


def fit_map(
    data: TrajectoryDataset, order: int, ridge: float = 0.0, **kwargs
) -> tuple[PolynomialMap, FitReport]:
    """Fits one map to every consecutive pair of a uniform trajectory."""
    inputs, outputs = data.pairs()
    return fit_pairs(inputs, outputs, order, ridge=ridge, dt=data.dt, **kwargs)


def predict(polymap: PolynomialMap, x0: np.ndarray, steps: int) -> TrajectoryDataset:
    """Iterates a fitted map from a new initial condition."""
    return iterate(polymap, x0, steps)
