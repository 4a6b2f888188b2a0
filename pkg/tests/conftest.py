"""
Pytest configuration and fixtures
"""
import os
import sys

import numpy as np
import pytest

# Add project root to path so `core` imports as a package
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from core.graphs import WeightedGraph  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: acceptance-scale runs (still part of the default run)")


def path_graph(n: int) -> WeightedGraph:
    """Unit-weighted path 0 - 1 - ... - n-1"""
    return WeightedGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> WeightedGraph:
    return WeightedGraph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def random_connected_graph(n: int, seed: int, extra_edges: int = None,
                           weighted: bool = True) -> WeightedGraph:
    """Random spanning tree plus extra edges; weights and masses in [0.5, 2]"""
    rng = np.random.default_rng(seed)
    edges = [(int(rng.integers(i)), i) for i in range(1, n)]
    extra = n if extra_edges is None else extra_edges
    for _ in range(extra):
        u, v = rng.choice(n, size=2, replace=False)
        edges.append((int(u), int(v)))
    if weighted:
        weights = rng.uniform(0.5, 2.0, size=len(edges))
        pi = rng.uniform(0.5, 2.0, size=n)
        return WeightedGraph.from_edges(n, [(u, v, w) for (u, v), w in zip(edges, weights)], pi)
    return WeightedGraph.from_edges(n, edges)


@pytest.fixture
def k2():
    return complete_graph(2)


@pytest.fixture
def rng():
    """Seeded generator for tests that need ad-hoc randomness"""
    return np.random.default_rng(7)
