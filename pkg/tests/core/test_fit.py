"""Tests for least-squares map fitting."""
from unittest import TestCase

import numpy as np

from liemaps.core.fit import design_matrix, fit_map, fit_pairs, predict
from liemaps.core.liemap import apply, build_map
from liemaps.core.odebench import vdp_system
from liemaps.core.polybasis import stacked_dim
from liemaps.models import PolynomialMap, TrajectoryDataset
from liemaps.utils import FormatError


def random_map(rng, n, order, scale=0.5):
    """Map with random weights of moderate size."""
    stacked = rng.normal(scale=scale, size=(n, stacked_dim(n, order)))
    return PolynomialMap.from_stacked(stacked, n, order, 0.1)


class TestFitPairs(TestCase):
    """Tests fitting from sample pairs."""

    def setUp(self) -> None:
        self.rng = np.random.default_rng(2024)

    def test_exact_recovery(self):
        """Noiseless data from a polynomial map gives back its weights."""
        for n, order in ((1, 4), (2, 2), (3, 3)):
            source = random_map(self.rng, n, order)
            inputs = self.rng.uniform(-1, 1, (300, n))
            polymap, report = fit_pairs(inputs, apply(source, inputs), order, dt=0.1)
            np.testing.assert_allclose(
                polymap.stacked_weights, source.stacked_weights, atol=1e-8, rtol=0
            )
            self.assertLess(report.mse, 1e-20)
            self.assertFalse(report.rank_deficient)
            self.assertEqual(report.rank, stacked_dim(n, order))
            self.assertLess(report.condition, 1e6)
            self.assertEqual(len(report.weight_norms), order + 1)

    def test_recovers_vdp_map(self):
        """Pairs generated by the order-3 Van der Pol map."""
        source = build_map(vdp_system(), 0.01, 3)
        inputs = self.rng.uniform(-2.5, 2.5, (400, 2))
        polymap, _ = fit_pairs(inputs, apply(source, inputs), 3, dt=0.01)
        for fitted, exact in zip(polymap.weights, source.weights):
            np.testing.assert_allclose(fitted, exact, atol=1e-6, rtol=0)
        self.assertEqual(polymap.dt, 0.01)

    def test_identity_data(self):
        """Y = X fits the identity and predicts a constant trajectory."""
        inputs = self.rng.uniform(-1, 1, (100, 2))
        polymap, report = fit_pairs(inputs, inputs, 3)
        np.testing.assert_allclose(
            polymap.stacked_weights,
            PolynomialMap.identity(2, 3, 1.0).stacked_weights,
            atol=1e-10,
        )
        self.assertLess(report.mse, 1e-20)
        trajectory = predict(polymap, [0.3, -0.4], 20)
        np.testing.assert_allclose(trajectory.states, np.tile([0.3, -0.4], (21, 1)), atol=1e-9)

    def test_permutation_invariance(self):
        """Shuffling pairs leaves the least-squares weights unchanged."""
        inputs = self.rng.uniform(-1, 1, (200, 2))
        outputs = apply(random_map(self.rng, 2, 2), inputs) + self.rng.normal(
            scale=0.01, size=(200, 2)
        )
        first, _ = fit_pairs(inputs, outputs, 2)
        order = self.rng.permutation(200)
        second, _ = fit_pairs(inputs[order], outputs[order], 2)
        np.testing.assert_allclose(
            first.stacked_weights, second.stacked_weights, atol=1e-12, rtol=0
        )

    def test_ridge_monotone(self):
        """Training MSE grows and the weight norm shrinks with ridge."""
        inputs = self.rng.uniform(-1, 1, (80, 2))
        outputs = apply(random_map(self.rng, 2, 3), inputs) + self.rng.normal(
            scale=0.05, size=(80, 2)
        )
        errors, norms = [], []
        for ridge in (0.0, 1e-3, 1e-1, 10.0):
            polymap, report = fit_pairs(inputs, outputs, 3, ridge=ridge)
            self.assertEqual(report.ridge, ridge)
            errors.append(report.mse)
            norms.append(np.linalg.norm(polymap.stacked_weights))
        for lower, higher in zip(errors, errors[1:]):
            self.assertLessEqual(lower, higher * (1 + 1e-12))
        for larger, smaller in zip(norms, norms[1:]):
            self.assertGreaterEqual(larger * (1 + 1e-12), smaller)

    def test_rank_deficient(self):
        """Collinear samples yield the minimum-norm solution with a warning."""
        line = self.rng.uniform(-1, 1, 50)
        inputs = np.column_stack([line, line])
        with self.assertLogs("liemaps", level="WARNING"):
            polymap, report = fit_pairs(inputs, inputs, 2)
        self.assertTrue(report.rank_deficient)
        self.assertLess(report.rank, stacked_dim(2, 2))
        self.assertLess(report.mse, 1e-20)
        np.testing.assert_allclose(polymap.weights[1], [[0.5, 0.5], [0.5, 0.5]], atol=1e-10)

    def test_gradient_method(self):
        """Fixed-step descent reaches the closed-form minimizer."""
        inputs = self.rng.uniform(-1, 1, (100, 2))
        outputs = inputs @ np.array([[0.9, 0.2], [-0.1, 1.1]]).T + 0.05
        closed, _ = fit_pairs(inputs, outputs, 1)
        descended, report = fit_pairs(inputs, outputs, 1, method="gradient")
        self.assertTrue(report.converged)
        self.assertEqual(report.method, "gradient")
        self.assertGreater(report.iterations, 1)
        np.testing.assert_allclose(
            descended.stacked_weights, closed.stacked_weights, atol=1e-8, rtol=0
        )

    def test_invalid_arguments(self):
        """Shape mismatch, order, ridge and method checks."""
        inputs = np.zeros((5, 2))
        with self.assertRaises(FormatError):
            fit_pairs(inputs, np.zeros((5, 3)), 2)
        with self.assertRaises(FormatError):
            fit_pairs(np.zeros((0, 2)), np.zeros((0, 2)), 2)
        with self.assertRaises(ValueError):
            fit_pairs(inputs, inputs, 0)
        with self.assertRaises(ValueError):
            fit_pairs(inputs, inputs, 2, ridge=-1.0)
        with self.assertRaises(ValueError):
            fit_pairs(inputs, inputs, 2, method="adam")


class TestFitMap(TestCase):
    """Tests fitting from trajectories."""

    def test_trajectory_pairs(self):
        """Consecutive samples become pairs and dt is carried over."""
        source = PolynomialMap.from_stacked(
            np.array([[0.0, 0.5, 0.1]]), 1, 2, 0.25
        )
        states = [[0.2]]
        for _ in range(30):
            states.append(apply(source, states[-1]))
        data = TrajectoryDataset(dt=0.25, states=np.array(states))
        polymap, report = fit_map(data, 2)
        self.assertEqual(polymap.dt, 0.25)
        self.assertEqual(report.samples, 30)
        self.assertEqual(design_matrix(data, 2).shape, (30, 3))

    def test_single_sample(self):
        """A one-sample trajectory has no pairs."""
        with self.assertRaises(FormatError):
            fit_map(TrajectoryDataset(dt=0.1, states=[[1.0, 2.0]]), 2)
