"""CliBench class for the Van der Pol and Burgers benchmarks."""
from __future__ import annotations

import os
from pathlib import Path
from typing import Optional

import toml

from liemaps.cli.maps import NumberList, parse_floats, require_positive
from liemaps.core import burgers, odebench
from liemaps.daos import DAO
from liemaps.models import BurgersConfig, RunConfig
from liemaps.utils import DivergenceError, FormatError, logger

DEFAULTS_PATH = Path(__file__).resolve().parent.parent / "resources" / "benchmarks.toml"


def load_defaults(path: str | Path = DEFAULTS_PATH) -> dict:
    """Reads benchmark defaults from toml."""
    try:
        return toml.load(path)
    except (OSError, toml.TomlDecodeError) as err:
        raise FormatError(str(err), location=str(path)) from err


class CliBench:
    """CliBench class.
    Entrypoint for benchmark commands.

    Each public method of this class is CLI command
    and arguments for method are options/flags for this command.
    Flags left out fall back to resources/benchmarks.toml.

    Ex: `python manager.py bench vdp --orders 3,5,7`
    """

    def __init__(self, root_path: Optional[str] = None):
        """CliBench class."""
        self.current_dir = root_path or os.path.abspath(os.getcwd())
        self.dao = DAO(path=self.current_dir)
        self.defaults = load_defaults()
        self.logger = logger

    def vdp(
        self,
        orders: Optional[NumberList] = None,
        dt: Optional[float] = None,
        t_end: Optional[float] = None,
        step: Optional[float] = None,
        fit_order: Optional[int] = None,
        output: str = "vdp_report.json",
    ) -> None:
        """Van der Pol order sweep and trajectory-fit errors.

        Args:
            orders: comma separated map orders
            dt: map time step
            t_end: trajectory length
            step: RK4 reference step
            fit_order: order of the fitted map
            output: report json file
        """
        defaults = self.defaults["vdp"]
        orders = [
            int(require_positive(order, "--orders", integer=True))
            for order in parse_floats(defaults["orders"] if orders is None else orders, "--orders")
        ]
        dt = require_positive(defaults["dt"] if dt is None else dt, "--dt")
        t_end = require_positive(defaults["t_end"] if t_end is None else t_end, "--t_end")
        step = require_positive(defaults["reference_step"] if step is None else step, "--step")
        fit_order = require_positive(
            defaults["fit_order"] if fit_order is None else fit_order, "--fit_order", integer=True
        )
        conditions = defaults["initial_conditions"]
        config = RunConfig(
            command="bench vdp",
            outputs={"report": output},
            parameters={
                "orders": orders,
                "dt": dt,
                "t_end": t_end,
                "reference_step": step,
                "fit_order": fit_order,
                "initial_conditions": conditions,
            },
        )
        try:
            references = odebench.reference_trajectories(
                odebench.vdp_rhs, conditions, t_end, dt, step
            )
        except ValueError as err:
            raise FormatError(str(err), location="--t_end/--dt/--step") from err
        sweep = odebench.order_sweep(
            orders, dt, t_end, step, conditions, references=references
        )
        fitted = odebench.fit_benchmark(
            fit_order, dt, t_end, step, conditions, references=references
        )
        self.dao.write_json(
            output, {"order_sweep": sweep, "fit": fitted, "config": config.to_dict()}
        )

    def burgers(
        self,
        nu: Optional[float] = None,
        nx: Optional[int] = None,
        dt_fdm: Optional[float] = None,
        dt_map: Optional[float] = None,
        t_end: Optional[float] = None,
        order: Optional[int] = None,
        halo: Optional[int] = None,
        expansion_order: Optional[int] = None,
        workers: Optional[int] = None,
        output: str = "burgers_report.json",
        snapshot_dir: Optional[str] = None,
        snapshot_times: Optional[NumberList] = None,
    ) -> None:
        """FDM versus stencil Lie map comparison.

        Args:
            nu: viscosity
            nx: mesh nodes on [0, 2pi)
            dt_fdm: FDM time step
            dt_map: map time step
            t_end: final time
            order: map truncation order
            halo: stencil half width r
            expansion_order: Taylor order of the spacing expansion
            workers: threads of the parallel map path (1 disables it)
            output: report json file
            snapshot_dir: directory for field snapshot csv files
            snapshot_times: comma separated snapshot times
        """
        # pylint: disable=too-many-arguments,too-many-locals
        defaults = self.defaults["burgers"]
        pick = lambda value, key: defaults[key] if value is None else value
        parameters = {
            "nu": float(pick(nu, "nu")),
            "nx": int(require_positive(pick(nx, "nx"), "--nx", integer=True)),
            "dt_fdm": require_positive(pick(dt_fdm, "dt_fdm"), "--dt_fdm"),
            "dt_map": require_positive(pick(dt_map, "dt_map"), "--dt_map"),
            "t_end": float(pick(t_end, "t_end")),
            "order": int(require_positive(pick(order, "order"), "--order", integer=True)),
            "halo": int(require_positive(pick(halo, "halo"), "--halo", integer=True)),
            "expansion_order": int(
                require_positive(pick(expansion_order, "expansion_order"), "--expansion_order", True)
            ),
            "workers": int(require_positive(pick(workers, "workers"), "--workers", integer=True)),
        }
        if parameters["nu"] <= 0:
            raise FormatError(f"Must be positive, got {parameters['nu']}", location="--nu")
        times = [] if snapshot_times is None else parse_floats(snapshot_times, "--snapshot_times")
        config = RunConfig(
            command="bench burgers",
            outputs={"report": output, "snapshot_dir": snapshot_dir},
            parameters={**parameters, "snapshot_times": times},
        )
        shared = {
            "nu": parameters["nu"],
            "nx": parameters["nx"],
            "t_end": parameters["t_end"],
            "map_order": parameters["order"],
            "halo": parameters["halo"],
            "expansion_order": parameters["expansion_order"],
        }
        cfg_fdm = BurgersConfig(dt=parameters["dt_fdm"], **shared)
        cfg_map = BurgersConfig(dt=parameters["dt_map"], **shared)

        rows = burgers.benchmark(cfg_fdm, cfg_map, workers=parameters["workers"])
        self.dao.write_json(
            output,
            {
                "rows": [row.to_dict() for row in rows],
                "timing": "propagation only, excluding file I/O and map building",
                "config": config.to_dict(),
            },
        )
        if snapshot_dir and times:
            self._write_snapshots(Path(snapshot_dir), cfg_fdm, cfg_map, times)

    def _write_snapshots(self, directory, cfg_fdm, cfg_map, times):
        for method, run in (
            ("fdm", lambda: burgers.run_fdm(cfg_fdm, snapshot_times=times)),
            ("lie_map", lambda: burgers.run_map(cfg_map, snapshot_times=times)),
        ):
            try:
                _, snapshots = run()
            except DivergenceError as err:
                logger.warning("No %s snapshots: %s", method, err)
                continue
            for field in snapshots:
                self.dao.write_field(directory / f"{method}_t{field.t:.6f}.csv", field)
