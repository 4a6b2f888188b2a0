"""
Unit tests for Cheeger constants and the Cheeger inequality
"""
import unittest
from itertools import combinations

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import complete_graph, path_graph, random_connected_graph
from core.errors import InvalidInputError, SizeLimitError
from core.graphs import build_weighted_chain
from core.spectral import (
    cheeger_bounds, cheeger_exact, cheeger_sweep, cut_weight, lambda1, verify_cheeger_inequality,
)
from core.verification import chain_cheeger


def brute_force_cheeger(G) -> float:
    """Plain itertools enumeration, independent of the vectorized code"""
    total = G.total_mass()
    best = np.inf
    for size in range(1, G.n):
        for subset in combinations(range(G.n), size):
            mass = G.mass(subset)
            if mass <= total / 2 * (1 + 1e-12):
                best = min(best, cut_weight(G, subset) / mass)
    return best


class TestCheegerExact(unittest.TestCase):
    """Test subset enumeration"""

    def test_q2(self):
        report = cheeger_exact(build_weighted_chain(2))
        self.assertAlmostEqual(report.value, 4.0 / 3.0, places=12)
        self.assertEqual(report.witness, (0, 1))
        self.assertEqual(report.method, 'exact')
        self.assertAlmostEqual(report.cut_weight, 4.0)
        self.assertAlmostEqual(report.mass, 3.0)

    def test_paths(self):
        for n in range(2, 13):
            self.assertAlmostEqual(cheeger_exact(path_graph(n)).value, 1.0 / (n // 2), places=12)

    def test_chains_at_least_one(self):
        for h in range(1, 17):
            self.assertGreaterEqual(cheeger_exact(build_weighted_chain(h)).value, 1.0 - 1e-12)

    def test_matches_brute_force(self):
        for seed in range(15):
            G = random_connected_graph(int(np.random.default_rng(seed).integers(3, 10)), seed=seed)
            assert_allclose(cheeger_exact(G).value, brute_force_cheeger(G), rtol=1e-12)

    def test_witness_consistent(self):
        G = random_connected_graph(9, seed=21)
        report = cheeger_exact(G)
        self.assertLessEqual(G.mass(report.witness), G.total_mass() / 2 * (1 + 1e-12))
        self.assertAlmostEqual(report.value, cut_weight(G, report.witness) / G.mass(report.witness))

    def test_size_limit(self):
        with self.assertRaises(SizeLimitError):
            cheeger_exact(path_graph(25))
        with self.assertRaises(SizeLimitError):
            cheeger_exact(path_graph(10), max_vertices=8)

    def test_single_vertex(self):
        from core.graphs import WeightedGraph
        with self.assertRaises(InvalidInputError):
            cheeger_exact(WeightedGraph.from_edges(1, []))

    def test_report_dict(self):
        data = cheeger_exact(complete_graph(4)).to_dict()
        self.assertEqual(set(data), {'value', 'witness', 'method', 'cut_weight', 'mass'})
        self.assertIsInstance(data['witness'], list)


class TestCheegerSweep(unittest.TestCase):
    """Test sweep cuts"""

    def test_path_fiedler_gives_half_cut(self):
        for n in (6, 7, 10):
            G = path_graph(n)
            fiedler = lambda1(G).eigenvector
            report = cheeger_sweep(G, fiedler)
            self.assertAlmostEqual(report.value, 1.0 / (n // 2), places=12)
            self.assertAlmostEqual(report.value, cheeger_exact(G).value, places=12)

    def test_indicator_recovers_optimum(self):
        G = random_connected_graph(10, seed=2)
        exact = cheeger_exact(G)
        indicator = np.zeros(G.n)
        indicator[list(exact.witness)] = 1.0
        self.assertAlmostEqual(cheeger_sweep(G, indicator).value, exact.value, places=12)

    def test_sweep_upper_bounds_exact(self):
        for seed in range(20):
            G = random_connected_graph(10, seed=seed)
            f = np.random.default_rng(seed).standard_normal(G.n)
            self.assertGreaterEqual(cheeger_sweep(G, f).value, cheeger_exact(G).value * (1 - 1e-12))

    def test_sweep_witness_is_small_side(self):
        G = random_connected_graph(14, seed=5)
        report = cheeger_sweep(G, lambda1(G).eigenvector)
        self.assertLessEqual(report.mass, G.total_mass() / 2 * (1 + 1e-12))
        self.assertEqual(report.method, 'sweep')

    def test_constant_vector_rejected(self):
        with self.assertRaises(InvalidInputError):
            cheeger_sweep(path_graph(4), np.ones(4))


class TestChainCheeger(unittest.TestCase):
    """Test the interval scan for weighted paths"""

    def test_matches_enumeration(self):
        for h in range(1, 13):
            Q = build_weighted_chain(h)
            self.assertAlmostEqual(chain_cheeger(Q).value, cheeger_exact(Q).value, places=12)
        for n in range(2, 12):
            self.assertAlmostEqual(chain_cheeger(path_graph(n)).value, 1.0 / (n // 2), places=12)

    def test_long_chain(self):
        report = chain_cheeger(build_weighted_chain(40))
        self.assertGreaterEqual(report.value, 1.0 - 1e-12)
        self.assertEqual(report.method, 'interval')

    def test_rejects_non_path(self):
        with self.assertRaises(InvalidInputError):
            chain_cheeger(complete_graph(3))


class TestCheegerInequality(unittest.TestCase):
    """Test h^2 / (2 d_max) <= lambda_1 <= 2h"""

    def test_k2(self):
        report = verify_cheeger_inequality(complete_graph(2))
        self.assertAlmostEqual(report.lambda1, 2.0)
        self.assertAlmostEqual(report.margin, 1.5)
        self.assertTrue(report.passed)

    def test_q2(self):
        report = verify_cheeger_inequality(build_weighted_chain(2))
        self.assertAlmostEqual(report.cheeger, 4.0 / 3.0)
        self.assertAlmostEqual(report.d_max, 3.0)
        self.assertTrue(report.passed)
        self.assertGreaterEqual(report.margin, 0.0)

    def test_bounds_tuple(self):
        lower, value, upper = cheeger_bounds(path_graph(6))
        self.assertLessEqual(lower, value)
        self.assertLessEqual(value, upper)

    @pytest.mark.slow
    def test_random_weighted_graphs(self):
        """200 seeded connected weighted graphs with n <= 12"""
        rng = np.random.default_rng(1)
        for i in range(200):
            n = int(rng.integers(2, 13))
            G = random_connected_graph(n, seed=1000 + i, extra_edges=int(rng.integers(0, n + 1)))
            report = verify_cheeger_inequality(G)
            scale = max(abs(report.lambda1), abs(report.lower_bound), 1.0)
            self.assertGreaterEqual(report.margin, -1e-9 * scale, f"graph {i}")
            self.assertTrue(report.passed, f"graph {i}")


if __name__ == '__main__':
    unittest.main()
