"""CliMaps class for building, iterating and fitting maps."""
from __future__ import annotations

import os
from typing import Optional, Union

from liemaps.core.fit import fit_map
from liemaps.core.liemap import build_map as build_lie_map
from liemaps.core.liemap import iterate
from liemaps.daos import DAO
from liemaps.models import RunConfig
from liemaps.utils import DivergenceError, FormatError, logger

NumberList = Union[str, float, int, tuple, list]


def parse_floats(value: NumberList, name: str) -> list[float]:
    """Accepts "a,b,c", a number, or a tuple fire already split."""
    if isinstance(value, str):
        items = [item for item in value.replace(" ", "").split(",") if item]
    elif isinstance(value, (list, tuple)):
        items = list(value)
    else:
        items = [value]
    try:
        return [float(item) for item in items]
    except (TypeError, ValueError) as err:
        raise FormatError(f"Expected comma separated numbers, got {value!r}", location=name) from err


def require_positive(value, name: str, integer: bool = False):
    """Validates a numeric flag."""
    kind = int if integer else float
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FormatError(f"Expected a number, got {value!r}", location=name)
    if integer and int(value) != value:
        raise FormatError(f"Expected an integer, got {value!r}", location=name)
    if value <= 0:
        raise FormatError(f"Must be positive, got {value!r}", location=name)
    return kind(value)


class CliMaps:
    """CliMaps class.
    Entrypoint for map commands.

    Each public method of this class is CLI command
    and arguments for method are options/flags for this command.

    Ex: `python manager.py maps build_map system.json --dt 0.01 --order 3`
    """

    def __init__(self, root_path: Optional[str] = None):
        """CliMaps class."""
        self.current_dir = root_path or os.path.abspath(os.getcwd())
        self.dao = DAO(path=self.current_dir)
        self.logger = logger

    def build_map(
        self,
        system: str,
        dt: float,
        order: int,
        backend: str = "expm",
        output: str = "map.json",
    ) -> None:
        """Builds the Lie map of a polynomial system.

        Args:
            system: system json file
            dt: time step
            order: truncation order
            backend: expm or rk4
            output: map json file
        """
        dt = require_positive(dt, "--dt")
        order = require_positive(order, "--order", integer=True)
        if backend not in ("expm", "rk4"):
            raise FormatError(f"Unknown backend {backend!r}", location="--backend")
        config = RunConfig(
            command="maps build_map",
            inputs={"system": system},
            outputs={"map": output},
            parameters={"dt": dt, "order": order, "backend": backend},
        )
        polymap = build_lie_map(self.dao.read_system(system), dt, order, backend=backend)
        polymap.metadata = {**(polymap.metadata or {}), "run": config.to_dict()}
        self.dao.write_map(output, polymap)

    def simulate(
        self,
        map_file: str,
        x0: NumberList,
        steps: int,
        output: str = "trajectory.csv",
    ) -> None:
        """Iterates a map from an initial state.

        On divergence the trajectory up to the last finite state is written
        with a "# diverged at step k" footer.

        Args:
            map_file: map json file
            x0: comma separated initial state, e.g. --x0=-2,4
            steps: number of map applications
            output: trajectory csv file
        """
        polymap = self.dao.read_map(map_file)
        state = parse_floats(x0, "--x0")
        if len(state) != polymap.n:
            raise FormatError(
                f"Initial state has {len(state)} components, map has n={polymap.n}",
                location="--x0",
            )
        if isinstance(steps, bool) or not isinstance(steps, int) or steps < 0:
            raise FormatError(f"Expected a non-negative integer, got {steps!r}", location="--steps")
        try:
            trajectory = iterate(polymap, state, steps)
        except DivergenceError as err:
            self.dao.write_trajectory(
                output, err.partial, footer=f"diverged at step {err.last_index + 1}"
            )
            raise
        self.dao.write_trajectory(output, trajectory)

    def fit(
        self,
        trajectory: str,
        order: int,
        ridge: float = 0.0,
        method: str = "lstsq",
        output: str = "map.json",
        report: str = "report.json",
    ) -> None:
        """Fits a map to a uniformly sampled trajectory.

        Args:
            trajectory: trajectory csv file
            order: polynomial order
            ridge: ridge parameter
            method: lstsq or gradient
            output: map json file
            report: fit report json file
        """
        order = require_positive(order, "--order", integer=True)
        if isinstance(ridge, bool) or not isinstance(ridge, (int, float)) or ridge < 0:
            raise FormatError(f"Expected a non-negative number, got {ridge!r}", location="--ridge")
        if method not in ("lstsq", "gradient"):
            raise FormatError(f"Unknown method {method!r}", location="--method")
        config = RunConfig(
            command="maps fit",
            inputs={"trajectory": trajectory},
            outputs={"map": output, "report": report},
            parameters={"order": order, "ridge": float(ridge), "method": method},
        )
        data = self.dao.read_trajectory(trajectory)
        polymap, fit_report = fit_map(data, order, ridge=float(ridge), method=method)
        polymap.metadata = {"run": config.to_dict()}
        self.dao.write_map(output, polymap)
        self.dao.write_json(report, {"report": fit_report.to_dict(), "config": config.to_dict()})
