"""
Constructions of the binary tree family, its subdivisions, level paths and quotient chains
"""
import logging
from typing import Optional, Tuple, Union

import numpy as np

from ..errors import CapacityExceededError, InvalidParameterError
from .weighted_graph import (
    PATH_EDGE, TREE_EDGE, GraphLike, HatTree, QuotientChain, WeightedGraph, as_weighted_graph,
)

logger = logging.getLogger('planar_gap.graphs.constructions')

DEFAULT_MAX_VERTICES = 5_000_000
# pi(j) = 2^j and w(j, j+1) = 2^(j+1) must stay inside signed 64-bit range
MAX_CHAIN_HEIGHT = 62


def count_formulas(h: int, k: int) -> Tuple[int, int]:
    """Closed-form (vertex count, edge count) of the hat tree with parameters (h, k)"""
    tree_edges = k * (2 ** (h + 1) - 2)
    return 1 + tree_edges, 2 * tree_edges - h * k


def _check_hk(h: int, k: int) -> None:
    if int(h) != h or h < 1:
        raise InvalidParameterError(f"tree height h must be an integer >= 1, got {h}")
    if int(k) != k or k < 1:
        raise InvalidParameterError(f"subdivision count k must be an integer >= 1, got {k}")


def _check_capacity(h: int, k: int, max_vertices: Optional[int]) -> None:
    limit = DEFAULT_MAX_VERTICES if max_vertices is None else max_vertices
    n, _ = count_formulas(h, k)
    if n > limit:
        raise CapacityExceededError(
            f"h={h}, k={k} needs {n} vertices, capacity is {limit}"
        )


def _level_layout(h: int, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """Per-level sizes 2^ceil(l/k) and id offsets for levels 0..hk"""
    levels = np.arange(h * k + 1)
    sizes = np.left_shift(1, -(-levels // k)).astype(np.int64)
    offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    return sizes, offsets


def _branch_words(sizes: np.ndarray) -> Tuple[str, ...]:
    words = []
    for size in sizes:
        length = int(size).bit_length() - 1
        for b in range(int(size)):
            bits = format(b, f'0{length}b') if length else ''
            words.append(bits.replace('0', 'L').replace('1', 'R'))
    return tuple(words)


def _assemble(h: int, k: int, with_paths: bool) -> HatTree:
    sizes, offsets = _level_layout(h, k)
    n = int(sizes.sum())
    level = np.repeat(np.arange(h * k + 1), sizes)

    tree_parts = []
    path_parts = []
    for l in range(1, h * k + 1):
        b = np.arange(sizes[l])
        # a level doubles exactly when l-1 is a branching depth of the underlying binary tree
        parent = b >> 1 if sizes[l] > sizes[l - 1] else b
        tree_parts.append(np.stack([offsets[l - 1] + parent, offsets[l] + b], axis=1))
        if with_paths and sizes[l] > 1:
            path_parts.append(np.stack([offsets[l] + b[:-1], offsets[l] + b[1:]], axis=1))

    tree = np.concatenate(tree_parts) if tree_parts else np.zeros((0, 2), dtype=np.int64)
    path = np.concatenate(path_parts) if path_parts else np.zeros((0, 2), dtype=np.int64)
    graph = WeightedGraph.from_arrays(n, np.concatenate([tree, path]))

    # edges come back sorted; a tree edge always joins different levels
    lu, lv = level[graph.edges[:, 0]], level[graph.edges[:, 1]]
    kinds = tuple(TREE_EDGE if a != c else PATH_EDGE for a, c in zip(lu.tolist(), lv.tolist()))
    level.setflags(write=False)
    return HatTree(graph=graph, h=int(h), k=int(k), root=0, level=level, edge_kind=kinds,
                   branch_word=_branch_words(sizes), has_level_paths=with_paths)


def build_binary_tree(h: int, max_vertices: Optional[int] = None) -> HatTree:
    """Complete rooted binary tree T_h (k = 1, no level paths), unit weights"""
    _check_hk(h, 1)
    _check_capacity(h, 1, max_vertices)
    return _assemble(h, 1, with_paths=False)


def build_hat_tree(h: int, k: int, max_vertices: Optional[int] = None) -> HatTree:
    """
    The k-subdivided binary tree of height h with a path through every level.

    Levels are ordered by branch word, which is the left-to-right in-order
    position for a complete binary tree.
    """
    _check_hk(h, k)
    _check_capacity(h, k, max_vertices)
    tree = _assemble(h, k, with_paths=True)
    logger.debug(f"Built hat tree h={h} k={k}: n={tree.n} m={tree.graph.m}")
    return tree


def build_weighted_chain(h: int) -> QuotientChain:
    """Q_h: path on 0..h with pi(j) = 2^j and w(j, j+1) = 2^(j+1)"""
    if int(h) != h or h < 1:
        raise InvalidParameterError(f"chain height h must be an integer >= 1, got {h}")
    if h > MAX_CHAIN_HEIGHT:
        raise CapacityExceededError(
            f"chain weights 2^(h+1) overflow 64-bit integers for h={h} (max {MAX_CHAIN_HEIGHT})"
        )
    j = np.arange(h + 1)
    pi = np.ldexp(1.0, j)
    uv = np.stack([j[:-1], j[1:]], axis=1)
    graph = WeightedGraph.from_arrays(h + 1, uv, np.ldexp(1.0, j[1:]), pi)
    return QuotientChain(graph=graph, provenance='Q_h', h=int(h), k=1)


def _subdivide_chain(chain: QuotientChain, k: int) -> QuotientChain:
    G = chain.graph
    length = chain.length
    w = G.edge_weight
    n = length * k + 1
    pi = np.empty(n)
    pi[::k] = G.vertex_weight
    for j in range(length):
        pi[j * k + 1:(j + 1) * k] = w[j]
    positions = np.arange(n)
    uv = np.stack([positions[:-1], positions[1:]], axis=1)
    graph = WeightedGraph.from_arrays(n, uv, np.repeat(w, k), pi)
    return QuotientChain(graph=graph, provenance='Q_hk', h=chain.h, k=chain.k * k)


def subdivide_edges(G: GraphLike, k: int) -> Union[WeightedGraph, QuotientChain]:
    """
    Replace every edge by a path of k edges through k-1 fresh vertices.

    A fresh vertex on an edge of weight w gets mass w and every sub-edge keeps
    weight w (mass 1 on unweighted graphs). Quotient chains stay chains, with
    positions renumbered along the path; other graphs keep their ids and the
    fresh vertices of edge i follow in order after all original vertices.
    """
    if int(k) != k or k < 1:
        raise InvalidParameterError(f"subdivision count k must be an integer >= 1, got {k}")
    if isinstance(G, QuotientChain):
        return _subdivide_chain(G, int(k))

    graph = as_weighted_graph(G)
    if k == 1:
        return WeightedGraph.from_arrays(graph.n, graph.edges, graph.edge_weight, graph.vertex_weight)

    m = graph.m
    fresh = (graph.n + np.arange(m * (k - 1))).reshape(m, k - 1)
    chains = np.concatenate([graph.edges[:, :1], fresh, graph.edges[:, 1:]], axis=1)
    uv = np.stack([chains[:, :-1].ravel(), chains[:, 1:].ravel()], axis=1)
    weights = np.repeat(graph.edge_weight, k)
    pi = np.concatenate([graph.vertex_weight, np.repeat(graph.edge_weight, k - 1)])
    return WeightedGraph.from_arrays(graph.n + m * (k - 1), uv, weights, pi)


def quotient_by_levels(T: HatTree) -> QuotientChain:
    """
    Identify each level set to one vertex of mass |V_l|.

    Tree edges between consecutive levels aggregate into the chain edge weight;
    path edges become self-loops and are dropped.
    """
    tree = T.tree_edges()
    lower = np.minimum(T.level[tree[:, 0]], T.level[tree[:, 1]])
    crossing = np.bincount(lower, minlength=T.depth).astype(np.float64)[:T.depth]
    positions = np.arange(T.depth + 1)
    uv = np.stack([positions[:-1], positions[1:]], axis=1)
    graph = WeightedGraph.from_arrays(T.depth + 1, uv, crossing,
                                      T.level_sizes.astype(np.float64))
    return QuotientChain(graph=graph, provenance='Q_hk', h=T.h, k=T.k)


def degree_stats(G: GraphLike) -> Tuple[int, float]:
    """(maximum degree, d_max = max_x pi(x)^-1 sum_y w(x,y))"""
    graph = as_weighted_graph(G)
    max_degree = int(graph.degree.max()) if graph.n else 0
    d_max = float(np.max(graph.weighted_degree / graph.vertex_weight))
    return max_degree, d_max
