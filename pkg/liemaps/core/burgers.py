"""Burgers' equation benchmark on the periodic interval [0, 2pi).

Two propagators are compared against the closed-form solution

    u(t, x) = -2 nu phi_x / phi + 4,
    phi = exp(-(x - 4t)^2 / (4 nu (t + 1))) + exp(-(x - 4t - 2pi)^2 / (4 nu (t + 1))):

an explicit finite difference scheme on the fixed mesh, and a Lie map of the
characteristic form x' = u, u' = nu u_xx on moving nodes. The Lie map is built
once for a window of 2r + 1 neighboring nodes and applied at every node.

Window state layout, for halo r:

    (sigma_{-r}, ..., sigma_{r-1}, u_{-r}, ..., u_r)

with sigma_j = (x_{j+1} - x_j - dx) / dx the spacing deviation in units of dx.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np
from scipy import signal

from liemaps.core.liemap import build_map
from liemaps.core.odebench import RhsFunction, mse
from liemaps.core.polybasis import stacked_basis
from liemaps.models import (
    BenchmarkRow,
    BurgersConfig,
    Field,
    PolynomialSystem,
    StencilMap,
)
from liemaps.models.burgers import PERIOD
from liemaps.utils import DivergenceError, FormatError, logger


def analytic_u(t: float, x, nu: float):
    """Closed-form solution, evaluated with the larger Gaussian factored out.

    With a = x - 4t and b = a - 2pi, u = 4 + (a w_a + b w_b) / ((t + 1)(w_a + w_b))
    where w_a, w_b are the Gaussians scaled by the larger of the two.
    """
    if nu <= 0:
        raise ValueError(f"Viscosity must be positive, got {nu}")
    if t < 0:
        raise ValueError(f"Time must be non-negative, got {t}")
    x = np.asarray(x, dtype=float)
    a = x - 4.0 * t
    b = a - PERIOD
    width = 4.0 * nu * (t + 1.0)
    log_a, log_b = -(a**2) / width, -(b**2) / width
    top = np.maximum(log_a, log_b)
    w_a, w_b = np.exp(log_a - top), np.exp(log_b - top)
    result = 4.0 + (a * w_a + b * w_b) / ((t + 1.0) * (w_a + w_b))
    return float(result) if result.ndim == 0 else result


def initial_field(cfg: BurgersConfig) -> Field:
    """Analytic solution at t = 0 on the uniform mesh."""
    field = Field.uniform(cfg.nx, np.zeros(cfg.nx))
    return Field(x=field.x, u=analytic_u(0.0, field.x, cfg.nu), t=0.0)


def fdm_step(u: np.ndarray, dt: float, dx: float, nu: float) -> np.ndarray:
    """One explicit Euler step, upwind convection and centered diffusion, periodic."""
    left = np.roll(u, 1)
    right = np.roll(u, -1)
    return u - dt * u * (u - left) / dx + nu * dt * (right - 2.0 * u + left) / dx**2


def _snapshot_steps(cfg: BurgersConfig, snapshot_times: Sequence[float]) -> set[int]:
    steps = set()
    for t in snapshot_times:
        step = int(round(t / cfg.dt))
        if not 0 <= step <= cfg.steps:
            raise FormatError(f"Snapshot time {t} outside [0, {cfg.t_end}]")
        steps.add(step)
    return steps


def run_fdm(
    cfg: BurgersConfig, u0: np.ndarray | None = None, snapshot_times: Sequence[float] = ()
) -> tuple[Field, list[Field]]:
    """FDM run to t_end from u0 (analytic t = 0 values by default).

    Returns:
        final field and the fields at the requested snapshot times
    """
    mesh = Field.uniform(cfg.nx, np.zeros(cfg.nx)).x
    u = initial_field(cfg).u.copy() if u0 is None else np.array(u0, dtype=float)
    if u.shape != (cfg.nx,):
        raise FormatError(f"Initial values have shape {u.shape}, expected ({cfg.nx},)")
    if not np.all(np.isfinite(u)):
        raise FormatError("Initial values are not finite")
    wanted = _snapshot_steps(cfg, snapshot_times)
    snapshots = [Field(x=mesh, u=u, t=0.0)] if 0 in wanted else []
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(1, cfg.steps + 1):
            u = fdm_step(u, cfg.dt, cfg.dx, cfg.nu)
            if not np.all(np.isfinite(u)):
                logger.warning("FDM became unstable at step %d", step)
                raise DivergenceError(
                    f"FDM field non-finite at step {step}", last_index=step - 1
                )
            if step in wanted:
                snapshots.append(Field(x=mesh, u=u, t=step * cfg.dt))
    return Field(x=mesh, u=u, t=cfg.steps * cfg.dt), snapshots


def fdm_simulate(cfg: BurgersConfig, u0: np.ndarray) -> Field:
    """FDM field at t_end after round(t_end / dt) steps."""
    return run_fdm(cfg, u0)[0]


def _reciprocal_series(order: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Taylor coefficients of the nonuniform second-difference weights.

    With h_- = dx (1 + a) and h_+ = dx (1 + b), returns g[i, l], the
    coefficients of a^i b^l up to total order `order`, for

        2 / ((1 + a)(2 + a + b)),  2 / ((1 + a)(1 + b)),  2 / ((1 + b)(2 + a + b))

    so that dx^2 u_xx ~ g_- u_{-1} - g_0 u_0 + g_+ u_{+1}.
    """
    powers = np.arange(order + 1)
    signs = (-1.0) ** powers
    inv_a = np.zeros((order + 1, order + 1))
    inv_a[:, 0] = signs
    inv_b = inv_a.T.copy()
    total = np.add.outer(powers, powers)
    binomials = np.array(
        [[math.comb(i + l, i) for l in powers] for i in powers], dtype=float
    )
    inv_sum = 0.5 * (-0.5) ** total * binomials
    keep = total <= order

    def product(first, second):
        return np.where(keep, signal.convolve2d(first, second)[: order + 1, : order + 1], 0.0)

    return (
        2.0 * product(inv_a, inv_sum),
        2.0 * product(inv_a, inv_b),
        2.0 * product(inv_b, inv_sum),
    )


def _window_terms(cfg: BurgersConfig, dim: int) -> list[tuple[int, tuple, float]]:
    r, dx = cfg.halo, cfg.dx
    spacing = lambda j: j + r
    value = lambda j: 3 * r + j

    def monomial(*powers):
        exponents = [0] * dim
        for index, power in powers:
            exponents[index] += power
        return tuple(exponents)

    terms = []
    for j in range(-r, r):
        terms.append((spacing(j), monomial((value(j + 1), 1)), 1.0 / dx))
        terms.append((spacing(j), monomial((value(j), 1)), -1.0 / dx))
    if cfg.nu == 0:
        return terms
    g_minus, g_center, g_plus = _reciprocal_series(cfg.expansion_order)
    scale = cfg.nu / dx**2
    for j in range(-r + 1, r):
        for weights, neighbor, sign in (
            (g_minus, j - 1, 1.0),
            (g_center, j, -1.0),
            (g_plus, j + 1, 1.0),
        ):
            for i, l in zip(*np.nonzero(weights)):
                if i + l + 1 > cfg.map_order:
                    continue
                exponents = monomial(
                    (spacing(j - 1), int(i)), (spacing(j), int(l)), (value(neighbor), 1)
                )
                terms.append((value(j), exponents, sign * scale * weights[i, l]))
    return terms


def stencil_system(cfg: BurgersConfig) -> PolynomialSystem:
    """Expanded window ODE over the (4r + 1)-dimensional window state.

    sigma_j' = (u_{j+1} - u_j) / dx for every spacing, interior values follow
    nu times the expanded nonuniform second difference, and the two edge
    values are frozen.
    """
    return PolynomialSystem.from_terms(cfg.window_dim, _window_terms(cfg, cfg.window_dim))


def exact_window_rhs(cfg: BurgersConfig, displacement: bool = False) -> RhsFunction:
    """Unexpanded rational window ODE, batch aware.

    With `displacement`, the state carries one more coordinate, the center
    displacement, whose derivative is u_0.
    """
    r, dx, nu = cfg.halo, cfg.dx, cfg.nu

    def rhs(state: np.ndarray) -> np.ndarray:
        state = np.asarray(state, dtype=float)
        sigma = state[..., : 2 * r]
        u = state[..., 2 * r : 4 * r + 1]
        result = np.zeros_like(state)
        result[..., : 2 * r] = (u[..., 1:] - u[..., :-1]) / dx
        h_minus = dx * (1.0 + sigma[..., :-1])
        h_plus = dx * (1.0 + sigma[..., 1:])
        result[..., 2 * r + 1 : 4 * r] = (
            2.0
            * nu
            * (
                u[..., :-2] / (h_minus * (h_minus + h_plus))
                - u[..., 1:-1] / (h_minus * h_plus)
                + u[..., 2:] / (h_plus * (h_minus + h_plus))
            )
        )
        if displacement:
            result[..., 4 * r + 1] = u[..., r]
        return result

    return rhs


def build_stencil_map(cfg: BurgersConfig, backend: str = "expm") -> StencilMap:
    """Window Lie map over cfg.dt, center rows only.

    A displacement coordinate with derivative u_0 is appended as the last
    variable; it is zero at the start of every step, so monomials containing
    it are dropped.
    """
    dim = cfg.window_dim
    terms = [(t, e + (0,), c) for t, e, c in _window_terms(cfg, dim)]
    center_u = tuple(1 if k == 3 * cfg.halo else 0 for k in range(dim)) + (0,)
    terms.append((dim, center_u, 1.0))
    extended = PolynomialSystem.from_terms(dim + 1, terms)
    polymap = build_map(extended, cfg.dt, cfg.map_order, backend=backend)

    window_basis = stacked_basis(dim, cfg.map_order)
    columns = [polymap.basis.position(alpha + (0,)) for alpha in map(tuple, window_basis.exponents)]
    rows = [dim, 3 * cfg.halo]
    weights = polymap.stacked_weights[np.ix_(rows, columns)]
    logger.info(
        "Built stencil map: halo=%d, order=%d, expansion=%d, %d monomials",
        cfg.halo,
        cfg.map_order,
        cfg.expansion_order,
        window_basis.size,
    )
    return StencilMap(
        weights=weights, halo=cfg.halo, order=cfg.map_order, dt=cfg.dt, dx=cfg.dx
    )


def window_states(stencil: StencilMap, field: Field) -> np.ndarray:
    """Window state of every node, shape (4r + 1, nx), periodic wrap."""
    r = stencil.halo
    sigma = (field.spacings() - stencil.dx) / stencil.dx
    rows = [np.roll(sigma, -j) for j in range(-r, r)]
    rows += [np.roll(field.u, -j) for j in range(-r, r + 1)]
    return np.array(rows)


def step_field(stencil: StencilMap, field: Field, workers: int = 1) -> Field:
    """Advances every node by one map step from the previous field.

    Raises:
        DivergenceError: non-finite values or crossed nodes
    """
    windows = window_states(stencil, field)
    columns = stencil.basis
    with np.errstate(over="ignore", invalid="ignore"):
        if workers > 1:
            chunks = np.array_split(np.arange(field.nx), workers)
            with ThreadPoolExecutor(max_workers=workers) as pool:
                parts = pool.map(
                    lambda nodes: stencil.weights
                    @ columns.monomial_columns(windows[:, nodes]),
                    chunks,
                )
                update = np.concatenate(list(parts), axis=1)
        else:
            update = stencil.weights @ columns.monomial_columns(windows)
    x = field.x + update[0]
    u = update[1]
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(u))):
        raise DivergenceError("Stencil map produced non-finite values", last_index=0, partial=field)
    if np.any(np.diff(x) <= 0) or x[-1] >= x[0] + PERIOD:
        raise DivergenceError("Stencil map nodes crossed", last_index=0, partial=field)
    return Field(x=x, u=u, t=field.t + stencil.dt)


def run_map(
    cfg: BurgersConfig,
    stencil: StencilMap | None = None,
    field: Field | None = None,
    snapshot_times: Sequence[float] = (),
    workers: int = 1,
) -> tuple[Field, list[Field]]:
    """Stencil-map run to t_end from `field` (analytic t = 0 field by default).

    Returns:
        final field and the fields at the requested snapshot times
    """
    stencil = build_stencil_map(cfg) if stencil is None else stencil
    field = initial_field(cfg) if field is None else field
    wanted = _snapshot_steps(cfg, snapshot_times)
    snapshots = [field] if 0 in wanted else []
    for step in range(1, cfg.steps + 1):
        try:
            field = step_field(stencil, field, workers)
        except DivergenceError as err:
            logger.warning("Stencil map run diverged at step %d", step)
            raise DivergenceError(
                f"Stencil map run diverged at step {step}", last_index=step - 1, partial=field
            ) from err
        if step in wanted:
            snapshots.append(field)
    return field, snapshots


def _timed(run):
    start = time.perf_counter()
    try:
        final, _ = run()
    except DivergenceError as err:
        return None, time.perf_counter() - start, err.last_index + 1
    return final, time.perf_counter() - start, None


def benchmark(
    cfg_fdm: BurgersConfig, cfg_map: BurgersConfig, workers: int = 1
) -> list[BenchmarkRow]:
    """FDM and stencil-map rows of the comparison table.

    Elapsed times cover propagation only; map building and the initial field
    are excluded. A diverged run reports `diverged_at_step` and no MSE.

    Raises:
        FormatError: configurations disagree, or nu = 0 (no closed-form
            reference)
    """
    if cfg_fdm.nu <= 0 or cfg_map.nu <= 0:
        raise FormatError("The benchmark needs nu > 0 for the analytic reference")
    if cfg_fdm.nu != cfg_map.nu or cfg_fdm.nx != cfg_map.nx:
        raise FormatError("FDM and map configurations must share nu and nx")
    if not math.isclose(cfg_fdm.steps * cfg_fdm.dt, cfg_map.steps * cfg_map.dt, abs_tol=1e-12):
        raise FormatError("FDM and map configurations must end at the same time")

    start = initial_field(cfg_fdm)
    fdm_final, fdm_seconds, fdm_diverged = _timed(lambda: run_fdm(cfg_fdm, start.u))
    stencil = build_stencil_map(cfg_map)
    map_final, map_seconds, map_diverged = _timed(
        lambda: run_map(cfg_map, stencil, start)
    )
    parallel_seconds = None
    if workers > 1:
        _, parallel_seconds, _ = _timed(
            lambda: run_map(cfg_map, stencil, start, workers=workers)
        )

    rows = []
    for method, cfg, final, seconds, diverged, parallel in (
        ("fdm", cfg_fdm, fdm_final, fdm_seconds, fdm_diverged, None),
        ("lie_map", cfg_map, map_final, map_seconds, map_diverged, parallel_seconds),
    ):
        error = None
        if final is not None:
            error = mse(final.u, analytic_u(final.t, final.wrapped_x, cfg.nu))
        rows.append(
            BenchmarkRow(
                method=method,
                time_step=cfg.dt,
                mesh=f"{cfg.nx}x{cfg.steps}",
                steps=cfg.steps,
                elapsed_seconds=seconds,
                mse_final=error,
                elapsed_seconds_parallel=parallel,
                diverged_at_step=diverged,
            )
        )
        logger.info(
            "%s: dt=%g, mesh=%s, elapsed=%.4fs, mse=%s",
            method,
            cfg.dt,
            rows[-1].mesh,
            seconds,
            "diverged" if error is None else f"{error:.3e}",
        )
    return rows
