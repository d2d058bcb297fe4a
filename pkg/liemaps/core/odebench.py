"""Van der Pol benchmark, fixed-step RK4 oracle and error metrics."""
from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from liemaps.core.fit import fit_map
from liemaps.core.liemap import build_map, iterate
from liemaps.core.polybasis import stacked_basis
from liemaps.models import PolynomialSystem, TrajectoryDataset
from liemaps.utils import DivergenceError, logger

RhsFunction = Callable[[np.ndarray], np.ndarray]

VDP_INITIAL_CONDITIONS = ((-2.0, 4.0), (1.0, 2.0), (2.0, -2.0), (-3.0, -3.0))
REFERENCE_STEP = 1e-4


def vdp_system() -> PolynomialSystem:
    """x' = y, y' = y - x - x^2 y."""
    return PolynomialSystem.from_terms(
        2,
        [
            (0, (0, 1), 1.0),
            (1, (1, 0), -1.0),
            (1, (0, 1), 1.0),
            (1, (2, 1), -1.0),
        ],
    )


def vdp_rhs(state: np.ndarray) -> np.ndarray:
    """Hand-coded Van der Pol right-hand side, batch aware."""
    x, y = state[..., 0], state[..., 1]
    return np.stack([y, y - x - x * x * y], axis=-1)


def polynomial_rhs(system: PolynomialSystem) -> RhsFunction:
    """Numeric right-hand side assembled from the system coefficients."""
    columns = stacked_basis(system.n, system.max_deg)
    weights = np.hstack(system.coeffs)

    def rhs(state: np.ndarray) -> np.ndarray:
        return columns.evaluate(state) @ weights.T

    return rhs


def _step_count(span: float, h: float) -> int:
    ratio = span / h
    count = int(round(ratio))
    if abs(ratio - count) > 1e-9 * max(1.0, ratio):
        raise ValueError(f"Interval {span} is not an integer multiple of {h}")
    return count


def rk4_solve_many(
    rhs: RhsFunction,
    initial_states: np.ndarray,
    t_end: float,
    h: float,
    stride: int = 1,
) -> list[TrajectoryDataset]:
    """Classical RK4 over [0, t_end] for a batch of initial states.

    Args:
        rhs: autonomous right-hand side accepting (b, n) arrays
        initial_states: (b, n) initial states
        t_end: final time, an integer multiple of h
        h: step
        stride: keep every `stride`-th state; the datasets have dt = stride h

    Returns:
        one trajectory per initial state
    """
    if h <= 0:
        raise ValueError(f"Step must be positive, got {h}")
    if t_end < h:
        raise ValueError(f"Final time {t_end} is shorter than the step {h}")
    if stride < 1:
        raise ValueError(f"Stride must be positive, got {stride}")
    steps = _step_count(t_end, h)
    if steps % stride:
        raise ValueError(f"{steps} steps are not divisible by stride {stride}")

    state = np.array(initial_states, dtype=float, ndmin=2)
    samples = np.empty((steps // stride + 1,) + state.shape)
    samples[0] = state
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, steps + 1):
            k1 = rhs(state)
            k2 = rhs(state + 0.5 * h * k1)
            k3 = rhs(state + 0.5 * h * k2)
            k4 = rhs(state + h * k3)
            state = state + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if k % stride == 0:
                if not np.all(np.isfinite(state)):
                    last = k // stride - 1
                    logger.warning("RK4 reference diverged at step %d", k)
                    raise DivergenceError(
                        f"RK4 integration diverged at step {k}",
                        last_index=last,
                        partial=[
                            TrajectoryDataset(dt=h * stride, states=samples[: last + 1, b])
                            for b in range(state.shape[0])
                        ],
                    )
                samples[k // stride] = state
    return [
        TrajectoryDataset(dt=h * stride, states=samples[:, b]) for b in range(state.shape[0])
    ]


def rk4_solve(
    rhs: RhsFunction, x0: np.ndarray, t_end: float, h: float, stride: int = 1
) -> TrajectoryDataset:
    """Classical RK4 trajectory from one initial state, sampled every stride h."""
    return rk4_solve_many(rhs, [np.asarray(x0, dtype=float).reshape(-1)], t_end, h, stride)[0]


def reference_trajectories(
    rhs: RhsFunction,
    initial_conditions: Sequence[Sequence[float]],
    t_end: float,
    dt: float,
    h: float = REFERENCE_STEP,
) -> list[TrajectoryDataset]:
    """RK4 references at step h sampled on the dt grid."""
    return rk4_solve_many(rhs, initial_conditions, t_end, h, stride=_step_count(dt, h))


def mean_relative_error(pred: TrajectoryDataset, ref: TrajectoryDataset) -> float:
    """Mean over samples i >= 1 of |pred_i - ref_i| / |ref_i| (Euclidean norms).

    Raises:
        ValueError: length, dimension or dt mismatch, or a zero-norm reference
    """
    if pred.states.shape != ref.states.shape:
        raise ValueError(
            f"Trajectory shapes differ: {pred.states.shape} != {ref.states.shape}"
        )
    if not np.isclose(pred.dt, ref.dt, rtol=1e-9, atol=0):
        raise ValueError(f"Time steps differ: {pred.dt} != {ref.dt}")
    if len(ref) < 2:
        return 0.0
    norms = np.linalg.norm(ref.states[1:], axis=1)
    if np.any(norms == 0):
        raise ValueError("Reference trajectory has a zero-norm sample")
    errors = np.linalg.norm(pred.states[1:] - ref.states[1:], axis=1)
    return float(np.mean(errors / norms))


def mse(pred: np.ndarray, ref: np.ndarray) -> float:
    """Mean of squared differences."""
    pred, ref = np.asarray(pred, dtype=float), np.asarray(ref, dtype=float)
    if pred.shape != ref.shape:
        raise ValueError(f"Shapes differ: {pred.shape} != {ref.shape}")
    if pred.size == 0:
        return 0.0
    return float(np.mean((pred - ref) ** 2))


def _map_errors(polymap, references):
    steps = references[0].steps
    errors = []
    for ref in references:
        try:
            errors.append(mean_relative_error(iterate(polymap, ref.states[0], steps), ref))
        except DivergenceError as err:
            logger.warning("Map trajectory from %s diverged: %s", ref.states[0].tolist(), err)
            errors.append(None)
    return errors


def _average(errors):
    return None if any(e is None for e in errors) else float(np.mean(errors))


def order_sweep(
    orders: Sequence[int] = (3, 5, 7),
    dt: float = 0.01,
    t_end: float = 10.0,
    h: float = REFERENCE_STEP,
    initial_conditions: Sequence[Sequence[float]] = VDP_INITIAL_CONDITIONS,
    references: list[TrajectoryDataset] | None = None,
) -> dict:
    """Mean relative error of Van der Pol Lie maps of several orders.

    Errors are averaged uniformly over the initial conditions; a diverged
    trajectory reports None.
    """
    if references is None:
        references = reference_trajectories(vdp_rhs, initial_conditions, t_end, dt, h)
    system = vdp_system()
    rows = []
    for order in orders:
        per_condition = _map_errors(build_map(system, dt, int(order)), references)
        rows.append(
            {"order": int(order), "error": _average(per_condition), "per_condition": per_condition}
        )
        logger.info("Order %d: mean relative error %s", order, rows[-1]["error"])
    return {
        "dt": dt,
        "t_end": t_end,
        "reference_step": h,
        "initial_conditions": [list(map(float, ic)) for ic in initial_conditions],
        "rows": rows,
    }


def fit_benchmark(
    order: int = 3,
    dt: float = 0.01,
    t_end: float = 10.0,
    h: float = REFERENCE_STEP,
    initial_conditions: Sequence[Sequence[float]] = VDP_INITIAL_CONDITIONS,
    ridge: float = 0.0,
    references: list[TrajectoryDataset] | None = None,
) -> dict:
    """Fits a map on the first trajectory and predicts all of them.

    Returns:
        dict with the training-condition error, the mean error over the
        remaining conditions and the fit report
    """
    if references is None:
        references = reference_trajectories(vdp_rhs, initial_conditions, t_end, dt, h)
    polymap, report = fit_map(references[0], order, ridge=ridge)
    per_condition = _map_errors(polymap, references)
    return {
        "order": order,
        "train_error": per_condition[0],
        "test_error": _average(per_condition[1:]) if len(per_condition) > 1 else None,
        "per_condition": per_condition,
        "fit": report.to_dict(),
    }
