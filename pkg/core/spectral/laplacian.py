"""
Combinatorial and normalized Laplacians on l^2(V, pi)
"""
from typing import Any, Optional

import numpy as np
import scipy.sparse as sp

from ..errors import InvalidInputError
from ..graphs.weighted_graph import GraphLike, as_weighted_graph


def laplacian_apply(G: GraphLike, f: Any) -> np.ndarray:
    """Lf(x) = pi(x)^-1 sum_y w(x,y) (f(x) - f(y))"""
    graph = as_weighted_graph(G)
    f = graph.check_vector(f)
    return (graph.weighted_degree * f - graph.adjacency @ f) / graph.vertex_weight


def inner_product(G: GraphLike, f: Any, g: Any) -> float:
    """<f, g>_pi"""
    graph = as_weighted_graph(G)
    return float(np.dot(graph.vertex_weight * graph.check_vector(f), graph.check_vector(g)))


def pi_norm(G: GraphLike, f: Any) -> float:
    return float(np.sqrt(max(inner_product(G, f, f), 0.0)))


def symmetric_laplacian(G: GraphLike, pi: Optional[np.ndarray] = None) -> sp.csr_matrix:
    """
    Pi^-1/2 (D - W) Pi^-1/2 as a sparse symmetric matrix.

    It is similar to L, so it has the same spectrum; eigenvectors map back
    through f = Pi^-1/2 u.
    """
    graph = as_weighted_graph(G)
    pi = graph.vertex_weight if pi is None else pi
    scale = sp.diags(1.0 / np.sqrt(pi))
    combinatorial = sp.diags(graph.weighted_degree) - graph.adjacency
    return (scale @ combinatorial @ scale).tocsr()


def normalized_laplacian_apply(G: GraphLike, f: Any, pi: Any) -> np.ndarray:
    """
    Pi^-1/2 (D - W) Pi^-1/2 f for a positive measure pi.

    For uniform pi this is the displayed sum of (pi(x)pi(y))^-1/2 (f(x) - f(y));
    its kernel is spanned by sqrt(pi) when pi is stationary, and with pi equal to
    the weighted degree it is the usual D^-1/2 (D - W) D^-1/2.
    """
    graph = as_weighted_graph(G)
    f = graph.check_vector(f)
    pi = graph.check_vector(pi, "measure")
    if np.any(pi <= 0) or not np.all(np.isfinite(pi)):
        raise InvalidInputError("normalized Laplacian needs a strictly positive measure")
    root = np.sqrt(pi)
    g = f / root
    return (graph.weighted_degree * g - graph.adjacency @ g) / root


def rayleigh_quotient(G: GraphLike, f: Any) -> float:
    """Dirichlet form over squared pi-norm"""
    graph = as_weighted_graph(G)
    f = graph.check_vector(f)
    denominator = float(np.dot(graph.vertex_weight, f * f))
    if denominator == 0.0:
        raise InvalidInputError("Rayleigh quotient of the zero vector")
    return graph.dirichlet_form(f) / denominator


def pi_center(G: GraphLike, f: Any) -> np.ndarray:
    """Subtract the pi-weighted mean so that sum pi(x) f(x) = 0"""
    graph = as_weighted_graph(G)
    f = graph.check_vector(f)
    return f - np.dot(graph.vertex_weight, f) / graph.total_mass()
