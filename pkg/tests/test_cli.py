"""Tests for cli."""
import os

from liemaps import run
from liemaps.cli import CliBench, CliMaps
from liemaps.daos import DAO
from liemaps.utils import FormatError
from tests.common import TestCaseWithResources

VDP = {
    "n": 2,
    "terms": [
        {"target": 0, "exponents": [0, 1], "coeff": 1.0},
        {"target": 1, "exponents": [1, 0], "coeff": -1.0},
        {"target": 1, "exponents": [0, 1], "coeff": 1.0},
        {"target": 1, "exponents": [2, 1], "coeff": -1.0},
    ],
}

DIVERGING_MAP = {
    "n": 1,
    "order": 2,
    "dt": 1.0,
    "basis": "grlex-desc",
    "weights": [
        {"degree": 0, "rows": 1, "cols": 1, "data": [0.0]},
        {"degree": 1, "rows": 1, "cols": 1, "data": [0.0]},
        {"degree": 2, "rows": 1, "cols": 1, "data": [1.0]},
    ],
}


class TestCli(TestCaseWithResources):
    """Test class for cli."""

    def setUp(self) -> None:
        super().setUp()
        self.previous_dir = os.getcwd()
        os.chdir(self.path)
        self.dao = DAO(self.path)
        self.dao.write_json("system.json", VDP)

    def tearDown(self) -> None:
        os.chdir(self.previous_dir)
        super().tearDown()

    def test_build_simulate_fit(self):
        """Tests the map workflow.
        Function: run
                -> maps build_map
                -> maps simulate
                -> maps fit
        """
        self.assertEqual(run(["maps", "build_map", "system.json", "--dt=0.01", "--order=3"]), 0)
        polymap = self.dao.read_map("map.json")
        self.assertEqual((polymap.n, polymap.order, polymap.dt), (2, 3, 0.01))
        self.assertEqual(polymap.metadata["run"]["command"], "maps build_map")

        self.assertEqual(run(["maps", "simulate", "map.json", "--x0=-2,4", "--steps=50"]), 0)
        trajectory = self.dao.read_trajectory("trajectory.csv")
        self.assertEqual(trajectory.states.shape, (51, 2))
        self.assertEqual(trajectory.states[0].tolist(), [-2.0, 4.0])

        self.assertEqual(
            run(["maps", "fit", "trajectory.csv", "--order=3", "--output=fitted.json"]), 0
        )
        report = self.dao.read_json("report.json")
        self.assertEqual(set(report), {"report", "config"})
        self.assertEqual(report["report"]["samples"], 50)
        self.assertEqual(report["config"]["parameters"]["order"], 3)
        self.assertEqual(self.dao.read_map("fitted.json").order, 3)

    def test_divergence_exit_code(self):
        """Diverged simulation exits 2 and keeps the partial trajectory."""
        self.dao.write_json("square.json", DIVERGING_MAP)
        self.assertEqual(run(["maps", "simulate", "square.json", "--x0=10", "--steps=20"]), 2)
        lines = (self.path / "trajectory.csv").read_text().splitlines()
        self.assertEqual(lines[-1], "# diverged at step 9")
        self.assertEqual(len(self.dao.read_trajectory("trajectory.csv")), 9)

    def test_usage_errors(self):
        """Bad flags and files exit 1."""
        self.assertEqual(run(["maps", "build_map", "missing.json", "--dt=0.01", "--order=3"]), 1)
        self.assertEqual(run(["maps", "build_map", "system.json", "--dt=-1", "--order=3"]), 1)
        self.assertEqual(
            run(["maps", "build_map", "system.json", "--dt=0.01", "--order=3", "--backend=euler"]),
            1,
        )
        self.assertEqual(run(["maps", "build_map", "system.json", "--dt=0.01", "--order=3"]), 0)
        self.assertEqual(run(["maps", "simulate", "map.json", "--x0=1,2,3", "--steps=5"]), 1)
        self.assertEqual(run(["maps", "simulate", "map.json", "--x0=1,2", "--steps=-5"]), 1)
        self.assertEqual(run(["maps", "fit", "missing.csv", "--order=3"]), 1)
        self.assertEqual(run(["maps", "nonexistent"]), 1)

        with self.assertRaises(FormatError):
            CliMaps(root_path=str(self.path)).fit("trajectory.csv", order=3, method="adam")

    def test_bench_burgers(self):
        """Short Burgers comparison with snapshots."""
        code = run(
            [
                "bench",
                "burgers",
                "--nx=64",
                "--t_end=0.01",
                "--output=burgers.json",
                "--snapshot_dir=snapshots",
                "--snapshot_times=0,0.005",
            ]
        )
        self.assertEqual(code, 0)
        report = self.dao.read_json("burgers.json")
        self.assertEqual([row["method"] for row in report["rows"]], ["fdm", "lie_map"])
        self.assertEqual(report["rows"][0]["mesh"], "64x40")
        self.assertEqual(report["config"]["parameters"]["nu"], 0.05)
        self.assertTrue((self.path / "snapshots" / "fdm_t0.000000.csv").is_file())
        self.assertTrue((self.path / "snapshots" / "fdm_t0.005000.csv").is_file())

        self.assertEqual(run(["bench", "burgers", "--nu=-1", "--nx=64", "--t_end=0.01"]), 1)

    def test_bench_vdp(self):
        """Short Van der Pol sweep."""
        bench = CliBench(root_path=str(self.path))
        bench.vdp(orders="3,5", t_end=0.1, step=1e-3, output="vdp.json")
        report = self.dao.read_json("vdp.json")
        self.assertEqual([row["order"] for row in report["order_sweep"]["rows"]], [3, 5])
        self.assertEqual(report["fit"]["order"], 3)
        self.assertEqual(report["config"]["command"], "bench vdp")

        with self.assertRaises(FormatError):
            bench.vdp(orders="3,x", t_end=0.1, step=1e-3)

