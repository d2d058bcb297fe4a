"""Tests for monomial bases."""
import itertools
import math
from unittest import TestCase

import numpy as np

from liemaps.core.polybasis import (
    MultiIndex,
    basis,
    basis_dim,
    index_of,
    reduced_kron,
    stacked_basis,
    stacked_monomials,
)


class TestBasis(TestCase):
    """Tests enumeration and indexing."""

    def test_ordering(self):
        """Graded-lex descending order of small bases."""
        self.assertEqual(
            [e.exponents for e in basis(2, 2).entries], [(2, 0), (1, 1), (0, 2)]
        )
        self.assertEqual(
            [e.exponents for e in basis(2, 3).entries],
            [(3, 0), (2, 1), (1, 2), (0, 3)],
        )
        self.assertEqual([e.exponents for e in basis(1, 5).entries], [(5,)])
        self.assertEqual(
            [e.exponents for e in basis(3, 1).entries], [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
        )

    def test_counts_and_round_trip(self):
        """Sizes match binomials and index_of inverts enumeration."""
        for n in range(1, 7):
            for k in range(0, 8):
                monomials = basis(n, k)
                self.assertEqual(len(monomials), math.comb(n + k - 1, k))
                self.assertEqual(basis_dim(n, k), len(monomials))
                self.assertEqual(len(set(monomials.entries)), len(monomials))
                for i, entry in enumerate(monomials.entries):
                    self.assertEqual(entry.degree, k)
                    self.assertEqual(entry.dimension, n)
                    self.assertEqual(index_of(monomials, entry), i)

    def test_basis_dim(self):
        """Binomial values and error reporting."""
        self.assertEqual(basis_dim(2, 3), 4)
        self.assertEqual(basis_dim(3, 2), 6)
        self.assertEqual(basis_dim(5, 0), 1)
        with self.assertRaises(ValueError):
            basis_dim(0, 2)
        with self.assertRaises(ValueError):
            basis(0, 2)
        with self.assertRaises(OverflowError):
            basis_dim(200, 200)

    def test_index_of(self):
        """Positions and mismatch errors."""
        self.assertEqual(index_of(basis(2, 2), (1, 1)), 1)
        self.assertEqual(index_of(basis(2, 3), MultiIndex((0, 3))), 3)
        with self.assertRaises(ValueError):
            index_of(basis(2, 2), (3, 0))
        with self.assertRaises(ValueError):
            index_of(basis(2, 2), (1, 0, 1))
        with self.assertRaises(ValueError):
            MultiIndex((1, -1))


class TestMonomials(TestCase):
    """Tests monomial evaluation."""

    def test_reduced_kron(self):
        """Direct products for a small state."""
        np.testing.assert_array_equal(reduced_kron([2, 3], 2), [4, 6, 9])
        np.testing.assert_array_equal(reduced_kron([2, 3], 1), [2, 3])
        np.testing.assert_array_equal(reduced_kron([2, 3], 3), [8, 12, 18, 27])
        np.testing.assert_array_equal(reduced_kron([2, 3], 0), [1])
        with self.assertRaises(ValueError):
            reduced_kron([np.nan, 1.0], 2)

    def test_reduced_kron_matches_kronecker_power(self):
        """Distinct entries of the full Kronecker power, in basis order."""
        state = np.array([0.3, -1.7, 2.2])
        full = np.kron(np.kron(state, state), state)
        reduced = reduced_kron(state, 3)
        for i, entry in enumerate(basis(3, 3).entries):
            flat = next(
                sum(c * 3 ** (2 - p) for p, c in enumerate(combo))
                for combo in itertools.product(range(3), repeat=3)
                if tuple(combo.count(m) for m in range(3)) == entry.exponents
            )
            self.assertAlmostEqual(reduced[i], full[flat], places=12)

    def test_multiplicativity(self):
        """Each entry equals the product of powers."""
        rng = np.random.default_rng(7)
        for n, k in ((2, 5), (3, 4), (4, 3)):
            state = rng.uniform(-2, 2, n)
            values = reduced_kron(state, k)
            for i, entry in enumerate(basis(n, k).entries):
                expected = math.prod(x**a for x, a in zip(state, entry.exponents))
                self.assertLessEqual(abs(values[i] - expected), 1e-14 * max(1.0, abs(expected)))

    def test_stacked_monomials(self):
        """Concatenation in degree order."""
        np.testing.assert_array_equal(stacked_monomials([2, 3], 2), [1, 2, 3, 4, 6, 9])
        np.testing.assert_array_equal(stacked_monomials([0, 0], 3), [1] + [0] * 9)
        np.testing.assert_array_equal(stacked_monomials([1, 1], 2), [1] * 6)

    def test_stacked_basis_layout(self):
        """Offsets, positions and batch evaluation."""
        columns = stacked_basis(3, 4)
        self.assertEqual(columns.offsets, (0, 1, 4, 10, 20, 35))
        self.assertEqual(columns.size, 35)
        self.assertEqual(columns.position((0, 0, 0)), 0)
        self.assertEqual(columns.position((0, 1, 0)), 2)
        self.assertEqual(columns.position((0, 0, 4)), 34)

        rng = np.random.default_rng(3)
        states = rng.uniform(-1, 1, (5, 3))
        batch = columns.evaluate(states)
        self.assertEqual(batch.shape, (5, 35))
        for row, state in zip(batch, states):
            expected = np.concatenate([reduced_kron(state, d) for d in range(5)])
            np.testing.assert_allclose(row, expected, rtol=1e-14, atol=1e-15)
        np.testing.assert_allclose(
            columns.monomial_columns(states.T), batch.T, rtol=1e-14, atol=1e-15
        )
