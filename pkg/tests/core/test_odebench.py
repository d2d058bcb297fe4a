"""Tests for the RK4 oracle, error metrics and Van der Pol benchmark."""
import math
from unittest import TestCase

import numpy as np

from liemaps.core.odebench import (
    VDP_INITIAL_CONDITIONS,
    fit_benchmark,
    mean_relative_error,
    mse,
    order_sweep,
    polynomial_rhs,
    reference_trajectories,
    rk4_solve,
    vdp_rhs,
    vdp_system,
)
from liemaps.models import PolynomialSystem, TrajectoryDataset
from liemaps.utils import DivergenceError

PUBLISHED_ERRORS = {3: 0.0110, 5: 4e-4, 7: 4.7e-6}


def oscillator(state):
    """x' = y, y' = -x."""
    return np.stack([state[..., 1], -state[..., 0]], axis=-1)


class TestRk4(TestCase):
    """Tests the fixed-step integrator."""

    def test_convergence_order(self):
        """Halving h divides the harmonic oscillator error by about 16."""
        exact = np.array([math.cos(1.0), -math.sin(1.0)])
        errors = [
            np.linalg.norm(rk4_solve(oscillator, [1.0, 0.0], 1.0, h).states[-1] - exact)
            for h in (0.01, 0.005)
        ]
        measured = math.log2(errors[0] / errors[1])
        self.assertGreaterEqual(measured, 3.8)
        self.assertLessEqual(measured, 4.2)

    def test_stride(self):
        """Strided output samples the full trajectory."""
        full = rk4_solve(vdp_rhs, [-2.0, 4.0], 0.5, 0.001)
        strided = rk4_solve(vdp_rhs, [-2.0, 4.0], 0.5, 0.001, stride=10)
        self.assertAlmostEqual(strided.dt, 0.01, places=15)
        self.assertEqual(len(full), 501)
        self.assertEqual(len(strided), 51)
        np.testing.assert_array_equal(strided.states, full.states[::10])

    def test_invalid_grids(self):
        """Non-positive, too large or non-integral steps."""
        with self.assertRaises(ValueError):
            rk4_solve(oscillator, [1.0, 0.0], 1.0, 0.0)
        with self.assertRaises(ValueError):
            rk4_solve(oscillator, [1.0, 0.0], 0.1, 0.2)
        with self.assertRaises(ValueError):
            rk4_solve(oscillator, [1.0, 0.0], 1.0, 0.3)
        with self.assertRaises(ValueError):
            rk4_solve(oscillator, [1.0, 0.0], 1.0, 0.1, stride=3)

    def test_divergence(self):
        """x' = x^2 from 1 blows up at t = 1."""
        blowup = PolynomialSystem.from_terms(1, [(0, (2,), 1.0)])
        with self.assertRaises(DivergenceError) as context:
            rk4_solve(polynomial_rhs(blowup), [1.0], 2.0, 0.01)
        partial = context.exception.partial
        self.assertEqual(len(partial), 1)
        self.assertEqual(len(partial[0]), context.exception.last_index + 1)
        self.assertTrue(np.all(np.isfinite(partial[0].states)))

    def test_polynomial_rhs(self):
        """Coefficient-assembled right-hand side equals the hand-coded one."""
        states = np.random.default_rng(4).uniform(-3, 3, (20, 2))
        np.testing.assert_allclose(
            polynomial_rhs(vdp_system())(states), vdp_rhs(states), rtol=1e-12, atol=1e-12
        )


class TestMetrics(TestCase):
    """Tests error metrics."""

    def test_mean_relative_error(self):
        """Sample 0 is skipped and errors are normalized per sample."""
        ref = TrajectoryDataset(dt=0.1, states=[[1.0, 0.0], [0.0, 2.0], [3.0, 4.0]])
        pred = TrajectoryDataset(dt=0.1, states=[[9.0, 9.0], [0.0, 2.2], [3.0, 4.5]])
        self.assertAlmostEqual(mean_relative_error(pred, ref), 0.1, places=12)
        self.assertEqual(mean_relative_error(ref, ref), 0.0)
        single = TrajectoryDataset(dt=0.1, states=[[1.0, 1.0]])
        self.assertEqual(mean_relative_error(single, single), 0.0)

    def test_mean_relative_error_mismatch(self):
        """Shape, dt and zero-norm errors."""
        ref = TrajectoryDataset(dt=0.1, states=[[1.0, 0.0], [0.0, 2.0]])
        with self.assertRaises(ValueError):
            mean_relative_error(TrajectoryDataset(dt=0.1, states=[[1.0, 0.0]]), ref)
        with self.assertRaises(ValueError):
            mean_relative_error(TrajectoryDataset(dt=0.2, states=ref.states), ref)
        zero = TrajectoryDataset(dt=0.1, states=[[1.0, 0.0], [0.0, 0.0]])
        with self.assertRaises(ValueError):
            mean_relative_error(ref, zero)

    def test_mse(self):
        """Mean of squared differences."""
        self.assertAlmostEqual(mse([1.0, 2.0, 3.0], [1.0, 0.0, 4.0]), 5.0 / 3.0)
        self.assertEqual(mse([], []), 0.0)
        with self.assertRaises(ValueError):
            mse([1.0], [1.0, 2.0])


class TestVanDerPolBenchmark(TestCase):
    """Order sweep and trajectory fit over T = 10."""

    @classmethod
    def setUpClass(cls) -> None:
        cls.references = reference_trajectories(
            vdp_rhs, VDP_INITIAL_CONDITIONS, 10.0, 0.01, 1e-4
        )

    def test_references(self):
        """Reference grid and initial states."""
        self.assertEqual(len(self.references), 4)
        for ref, initial in zip(self.references, VDP_INITIAL_CONDITIONS):
            self.assertEqual(ref.states.shape, (1001, 2))
            self.assertAlmostEqual(ref.dt, 0.01, places=15)
            np.testing.assert_array_equal(ref.states[0], initial)

    def test_order_sweep(self):
        """Errors near the published values and decreasing in order."""
        report = order_sweep(
            (3, 5, 7), 0.01, 10.0, 1e-4, VDP_INITIAL_CONDITIONS, references=self.references
        )
        errors = [row["error"] for row in report["rows"]]
        for row in report["rows"]:
            expected = PUBLISHED_ERRORS[row["order"]]
            self.assertIsNotNone(row["error"])
            self.assertEqual(len(row["per_condition"]), 4)
            self.assertGreaterEqual(row["error"], expected / 3)
            self.assertLessEqual(row["error"], expected * 3)
        self.assertGreater(errors[0], errors[1])
        self.assertGreater(errors[1], errors[2])
        self.assertEqual(report["reference_step"], 1e-4)

    def test_fit_benchmark(self):
        """An order-3 fit on one trajectory is limited by truncation."""
        result = fit_benchmark(
            3, 0.01, 10.0, 1e-4, VDP_INITIAL_CONDITIONS, references=self.references
        )
        self.assertGreaterEqual(result["train_error"], 2e-3)
        self.assertLessEqual(result["train_error"], 8e-3)
        self.assertGreaterEqual(result["test_error"], 1.5e-2)
        self.assertLessEqual(result["test_error"], 5e-2)
        self.assertEqual(len(result["per_condition"]), 4)
        self.assertEqual(result["fit"]["samples"], 1000)
        self.assertFalse(result["fit"]["rank_deficient"])

    def test_fit_benchmark_fifth_order(self):
        """An order-5 fit predicts the unseen conditions within 1e-3."""
        result = fit_benchmark(
            5, 0.01, 10.0, 1e-4, VDP_INITIAL_CONDITIONS, references=self.references
        )
        self.assertLessEqual(result["train_error"], 1e-4)
        self.assertLessEqual(result["test_error"], 1e-3)
        self.assertEqual(result["order"], 5)
