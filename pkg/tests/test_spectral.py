"""
Unit tests for Laplacian operators and the lambda_1 solvers
"""
import unittest

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from conftest import complete_graph, path_graph, random_connected_graph
from core.errors import ConvergenceError, DimensionMismatchError, InvalidInputError, InvalidParameterError
from core.graphs import WeightedGraph, build_hat_tree, build_weighted_chain
from core.spectral import (
    SpectralReport, inner_product, lambda1, laplacian_apply, normalized_lambda1,
    normalized_laplacian_apply, pi_center, pi_norm, rayleigh_quotient, residual_scale,
    symmetric_laplacian,
)


def path_gap(n: int) -> float:
    return 2.0 * (1.0 - np.cos(np.pi / n))


class TestLaplacian(unittest.TestCase):
    """Test operator application"""

    def test_constant_in_kernel(self):
        G = random_connected_graph(12, seed=1)
        assert_allclose(laplacian_apply(G, np.full(12, 3.0)), np.zeros(12), atol=1e-12)

    def test_k2(self):
        assert_allclose(laplacian_apply(complete_graph(2), [1.0, 0.0]), [1.0, -1.0])

    def test_q1(self):
        assert_allclose(laplacian_apply(build_weighted_chain(1), [1.0, 0.0]), [2.0, -1.0])

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            laplacian_apply(complete_graph(3), [1.0, 2.0])

    def test_self_adjoint_in_pi(self):
        G = random_connected_graph(20, seed=5)
        rng = np.random.default_rng(0)
        f, g = rng.standard_normal(20), rng.standard_normal(20)
        self.assertAlmostEqual(inner_product(G, laplacian_apply(G, f), g),
                               inner_product(G, f, laplacian_apply(G, g)), places=10)

    def test_dirichlet_identity(self):
        """<Lf, f>_pi equals the Dirichlet form"""
        G = random_connected_graph(15, seed=2)
        f = np.random.default_rng(3).standard_normal(15)
        self.assertAlmostEqual(inner_product(G, laplacian_apply(G, f), f), G.dirichlet_form(f), places=10)

    def test_normalized_k2(self):
        out = normalized_laplacian_apply(complete_graph(2), [1.0, -1.0], [0.5, 0.5])
        assert_allclose(out, [4.0, -4.0])

    def test_normalized_kernel(self):
        G = random_connected_graph(10, seed=8)
        pi = G.weighted_degree
        assert_allclose(normalized_laplacian_apply(G, np.sqrt(pi), pi), np.zeros(10), atol=1e-12)

    def test_normalized_matches_matrix(self):
        """Against D^-1/2 (D - W) D^-1/2 built by hand on P_3"""
        G = path_graph(3)
        W = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=float)
        d = W.sum(axis=1)
        matrix = np.diag(d ** -0.5) @ (np.diag(d) - W) @ np.diag(d ** -0.5)
        f = np.random.default_rng(4).standard_normal(3)
        assert_allclose(normalized_laplacian_apply(G, f, d), matrix @ f, atol=1e-12)

    def test_normalized_requires_positive_measure(self):
        with self.assertRaises(InvalidInputError):
            normalized_laplacian_apply(complete_graph(2), [1.0, 0.0], [1.0, 0.0])

    def test_symmetric_matrix(self):
        G = random_connected_graph(9, seed=12)
        S = symmetric_laplacian(G).toarray()
        assert_allclose(S, S.T, atol=1e-14)

    def test_rayleigh(self):
        self.assertAlmostEqual(rayleigh_quotient(complete_graph(2), [1.0, -1.0]), 2.0)
        self.assertAlmostEqual(rayleigh_quotient(build_weighted_chain(1), [2.0, -1.0]), 3.0)
        with self.assertRaises(InvalidInputError):
            rayleigh_quotient(complete_graph(2), [0.0, 0.0])

    def test_rayleigh_above_gap(self):
        for seed in range(10):
            G = random_connected_graph(12, seed=seed)
            gap = lambda1(G).lambda1
            f = pi_center(G, np.random.default_rng(seed).standard_normal(12))
            self.assertGreaterEqual(rayleigh_quotient(G, f), gap - 1e-9)

    def test_pi_center_and_norm(self):
        G = build_weighted_chain(1)
        f = pi_center(G, [1.0, 0.0])
        self.assertAlmostEqual(float(np.dot(G.graph.vertex_weight, f)), 0.0)
        self.assertAlmostEqual(pi_norm(G, [1.0, 1.0]), np.sqrt(3.0))


class TestLambda1(unittest.TestCase):
    """Test the eigensolvers"""

    def test_k2(self):
        report = lambda1(complete_graph(2))
        self.assertAlmostEqual(report.lambda1, 2.0, places=10)
        self.assertEqual(report.solver, 'dense')

    def test_triangle(self):
        self.assertAlmostEqual(lambda1(build_hat_tree(1, 1)).lambda1, 3.0, places=10)

    def test_q1(self):
        self.assertAlmostEqual(lambda1(build_weighted_chain(1)).lambda1, 3.0, places=10)

    def test_paths(self):
        for n in (5, 50, 500):
            assert_allclose(lambda1(path_graph(n)).lambda1, path_gap(n), rtol=0, atol=1e-8)

    def test_chains_above_one_sixth(self):
        for h in range(1, 21):
            self.assertGreaterEqual(lambda1(build_weighted_chain(h), tolerance=1e-10).lambda1, 1.0 / 6.0)

    def test_eigenvector_normalized_and_certified(self):
        G = random_connected_graph(30, seed=4)
        report = lambda1(G)
        pi = G.vertex_weight
        f = report.eigenvector
        self.assertAlmostEqual(float(np.dot(pi, f)), 0.0, places=10)
        self.assertAlmostEqual(float(np.dot(pi, f * f)), 1.0, places=10)
        self.assertLessEqual(report.residual, report.tolerance * residual_scale(G))
        r = laplacian_apply(G, f) - report.lambda1 * f
        self.assertAlmostEqual(float(np.sqrt(np.dot(pi, r * r))), report.residual, places=12)

    def test_relabeling_invariant(self):
        rng = np.random.default_rng(31)
        for G in (random_connected_graph(40, seed=12), build_hat_tree(2, 4).graph):
            perm = rng.permutation(G.n)
            assert_allclose(lambda1(G.relabeled(perm)).lambda1, lambda1(G).lambda1, rtol=1e-10)

    def test_edge_weight_scaling(self):
        G = random_connected_graph(30, seed=8)
        base = lambda1(G).lambda1
        for c in (2.0, 10.0):
            scaled = WeightedGraph.from_arrays(G.n, G.edges, c * G.edge_weight, G.vertex_weight)
            assert_allclose(lambda1(scaled).lambda1, c * base, rtol=1e-10)

    def test_report_dict(self):
        data = lambda1(complete_graph(3)).to_dict()
        self.assertEqual(set(data), {'lambda1', 'residual', 'solver', 'iterations', 'tolerance'})

    def test_disconnected(self):
        G = WeightedGraph.from_edges(4, [(0, 1), (2, 3)])
        report = lambda1(G)
        self.assertEqual(report.lambda1, 0.0)
        self.assertEqual(len(set(report.components)), 2)
        assert_allclose(laplacian_apply(G, report.eigenvector), np.zeros(4), atol=1e-12)

    def test_invalid_options(self):
        with self.assertRaises(InvalidParameterError):
            lambda1(complete_graph(3), solver='qr')
        with self.assertRaises(InvalidParameterError):
            lambda1(complete_graph(3), tolerance=0.0)
        with self.assertRaises(InvalidInputError):
            lambda1(WeightedGraph.from_edges(1, []))

    def test_dense_iterative_agree_on_random_graphs(self):
        rng = np.random.default_rng(2024)
        for i in range(20):
            n = int(rng.integers(50, 501))
            G = random_connected_graph(n, seed=100 + i)
            dense = lambda1(G, solver='dense').lambda1
            iterative = lambda1(G, solver='iterative', seed=i)
            assert_allclose(iterative.lambda1, dense, rtol=1e-6)
            self.assertTrue(iterative.converged)

    def test_dense_iterative_agree_on_hat_tree(self):
        T = build_hat_tree(3, 8)
        dense = lambda1(T, solver='dense').lambda1
        iterative = lambda1(T, solver='iterative')
        assert_allclose(iterative.lambda1, dense, rtol=1e-6)
        self.assertLessEqual(iterative.residual, 1e-8 * residual_scale(T))

    def test_iterative_deterministic(self):
        G = random_connected_graph(120, seed=9)
        a = lambda1(G, solver='iterative', seed=3)
        lambda1(random_connected_graph(200, seed=10), solver='iterative', seed=5)
        b = lambda1(G, solver='iterative', seed=3)
        self.assertEqual(a.lambda1, b.lambda1)
        self.assertEqual(a.iterations, b.iterations)
        assert_array_equal(a.eigenvector, b.eigenvector)

    def test_convergence_failure_carries_best(self):
        """A residual that cannot be certified raises with the best iterate"""
        G = random_connected_graph(80, seed=6)
        with self.assertRaises(ConvergenceError) as ctx:
            lambda1(G, solver='iterative', tolerance=1e-30, max_iter=3)
        best = ctx.exception.best
        self.assertIsInstance(best, SpectralReport)
        self.assertFalse(best.converged)

    @pytest.mark.slow
    def test_iterative_large_hat_tree(self):
        T = build_hat_tree(5, 32)
        report = lambda1(T, solver='iterative')
        self.assertLessEqual(report.residual, 1e-8 * residual_scale(T))
        self.assertGreaterEqual(report.lambda1, 1.0 / (7 * 32 ** 2))


class TestNormalizedGap(unittest.TestCase):
    """Test normalized_lambda1"""

    def test_k2(self):
        self.assertAlmostEqual(normalized_lambda1(complete_graph(2)).lambda1, 2.0, places=10)

    def test_regular_graph_scales(self):
        """On a d-regular graph the normalized gap is lambda_1 / d"""
        triangle = build_hat_tree(1, 1)
        self.assertAlmostEqual(normalized_lambda1(triangle).lambda1, 1.5, places=10)

    def test_isolated_vertex(self):
        with self.assertRaises(InvalidInputError):
            normalized_lambda1(WeightedGraph.from_edges(3, [(0, 1)]))


if __name__ == '__main__':
    unittest.main()
