"""
Weighted graph containers: general weighted graphs, hat trees and level quotients
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from ..errors import DimensionMismatchError, InvalidInputError

logger = logging.getLogger('planar_gap.graphs')

TREE_EDGE = 'tree'
PATH_EDGE = 'path'

EdgeSpec = Union[Tuple[int, int], Tuple[int, int, float]]


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """
    Undirected graph with vertex masses pi(x) > 0 and edge conductances w(x,y) > 0.

    Edges are stored once, as (u, v) with u < v, sorted lexicographically;
    `edge_weight[i]` belongs to `edges[i]`. Arrays are read-only after construction.
    """
    n: int
    vertex_weight: np.ndarray
    edges: np.ndarray
    edge_weight: np.ndarray

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[EdgeSpec],
                   vertex_weight: Optional[Sequence[float]] = None) -> 'WeightedGraph':
        """
        Build a graph from (u, v) or (u, v, w) tuples.

        Parallel edges merge by summing their weights; self-loops and
        nonpositive weights are rejected.
        """
        if n < 1:
            raise InvalidInputError(f"graph needs at least one vertex, got n={n}")

        rows = [tuple(e) for e in edges]
        if rows:
            uv = np.array([(r[0], r[1]) for r in rows], dtype=np.int64)
            w = np.array([r[2] if len(r) > 2 else 1.0 for r in rows], dtype=np.float64)
        else:
            uv = np.zeros((0, 2), dtype=np.int64)
            w = np.zeros(0, dtype=np.float64)
        return cls.from_arrays(n, uv, w, vertex_weight)

    @classmethod
    def from_arrays(cls, n: int, uv: np.ndarray, w: Optional[np.ndarray] = None,
                    vertex_weight: Optional[Sequence[float]] = None) -> 'WeightedGraph':
        """Vectorized constructor; same rules as `from_edges`"""
        uv = np.asarray(uv, dtype=np.int64).reshape(-1, 2)
        w = np.ones(len(uv)) if w is None else np.asarray(w, dtype=np.float64).ravel()
        if len(w) != len(uv):
            raise DimensionMismatchError(len(uv), len(w), "edge weight array")

        pi = np.ones(n) if vertex_weight is None else np.array(vertex_weight, dtype=np.float64)
        if pi.shape != (n,):
            raise DimensionMismatchError(n, pi.size, "vertex weight vector")
        if not np.all(np.isfinite(pi)) or np.any(pi <= 0):
            bad = int(np.flatnonzero(~(np.isfinite(pi) & (pi > 0)))[0])
            raise InvalidInputError(f"vertex {bad} has nonpositive weight {pi[bad]}")

        if len(uv):
            if uv.min() < 0 or uv.max() >= n:
                raise InvalidInputError(f"edge endpoint out of range [0, {n})")
            loops = np.flatnonzero(uv[:, 0] == uv[:, 1])
            if loops.size:
                x = int(uv[loops[0], 0])
                raise InvalidInputError(f"self-loop at vertex {x}")
            if not np.all(np.isfinite(w)) or np.any(w <= 0):
                i = int(np.flatnonzero(~(np.isfinite(w) & (w > 0)))[0])
                raise InvalidInputError(f"edge {uv[i, 0]}-{uv[i, 1]} has nonpositive weight {w[i]}")

            lo = np.minimum(uv[:, 0], uv[:, 1])
            hi = np.maximum(uv[:, 0], uv[:, 1])
            keys, inverse = np.unique(lo * n + hi, return_inverse=True)
            if len(keys) < len(uv):
                logger.debug(f"Merged {len(uv) - len(keys)} parallel edge(s) by weight summation")
            merged = np.zeros(len(keys))
            np.add.at(merged, inverse, w)
            uv = np.stack([keys // n, keys % n], axis=1)
            w = merged

        return cls(n=int(n), vertex_weight=_frozen(pi), edges=_frozen(uv), edge_weight=_frozen(w))

    @property
    def m(self) -> int:
        return int(len(self.edges))

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        """Symmetric sparse weight matrix W"""
        u, v = self.edges[:, 0], self.edges[:, 1]
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        data = np.concatenate([self.edge_weight, self.edge_weight])
        return sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    @cached_property
    def weighted_degree(self) -> np.ndarray:
        """deg_w(x) = sum_y w(x,y)"""
        return _frozen(np.asarray(self.adjacency.sum(axis=1)).ravel())

    @cached_property
    def degree(self) -> np.ndarray:
        """Number of incident edges per vertex"""
        return _frozen(np.diff(self.adjacency.indptr).astype(np.int64))

    def neighbors(self, x: int) -> Iterator[Tuple[int, float]]:
        """Yield (y, w(x,y)) for every edge incident to x, each once"""
        A = self.adjacency
        start, end = A.indptr[x], A.indptr[x + 1]
        for y, w in zip(A.indices[start:end], A.data[start:end]):
            yield int(y), float(w)

    def is_unit_weighted(self) -> bool:
        return bool(np.all(self.vertex_weight == 1.0) and np.all(self.edge_weight == 1.0))

    def total_mass(self) -> float:
        return float(self.vertex_weight.sum())

    def mass(self, subset: Iterable[int]) -> float:
        """pi(S)"""
        idx = np.fromiter(subset, dtype=np.int64)
        return float(self.vertex_weight[idx].sum())

    def check_vector(self, f: Any, what: str = "vector") -> np.ndarray:
        arr = np.asarray(f, dtype=np.float64)
        if arr.ndim != 1 or arr.shape[0] != self.n:
            raise DimensionMismatchError(self.n, arr.size, what)
        return arr

    def dirichlet_form(self, f: Any) -> float:
        """sum over edges of w(x,y) (f(x) - f(y))^2"""
        f = self.check_vector(f)
        diff = f[self.edges[:, 0]] - f[self.edges[:, 1]]
        return float(np.dot(self.edge_weight, diff * diff))

    def components(self) -> Tuple[int, np.ndarray]:
        """(number of components, component label per vertex)"""
        count, labels = connected_components(self.adjacency, directed=False)
        return int(count), labels

    def is_connected(self) -> bool:
        return self.components()[0] == 1

    def with_vertex_weights(self, vertex_weight: Sequence[float]) -> 'WeightedGraph':
        """Same topology and conductances, new vertex masses"""
        return WeightedGraph.from_arrays(self.n, self.edges, self.edge_weight, vertex_weight)

    def relabeled(self, permutation: Sequence[int]) -> 'WeightedGraph':
        """Vertex x becomes permutation[x]"""
        perm = np.asarray(permutation, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(self.n)):
            raise InvalidInputError("relabeling is not a permutation of the vertex ids")
        pi = np.empty(self.n)
        pi[perm] = self.vertex_weight
        return WeightedGraph.from_arrays(self.n, perm[self.edges], self.edge_weight, pi)

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from((x, {'pi': float(p)}) for x, p in enumerate(self.vertex_weight))
        G.add_weighted_edges_from(
            (int(u), int(v), float(w)) for (u, v), w in zip(self.edges, self.edge_weight)
        )
        return G

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (self.n == other.n
                and np.array_equal(self.vertex_weight, other.vertex_weight)
                and np.array_equal(self.edges, other.edges)
                and np.array_equal(self.edge_weight, other.edge_weight))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.m})"


@dataclass(frozen=True, eq=False)
class HatTree:
    """
    A subdivided complete binary tree with a path through every level.

    `level[x]` is the distance from the root, `edge_kind[i]` tags `graph.edges[i]`
    as 'tree' or 'path', and `branch_word[x]` is the L/R string of branching
    choices on the root path of x. Vertex ids run level by level, and inside a
    level in branch-word order.
    """
    graph: WeightedGraph
    h: int
    k: int
    root: int
    level: np.ndarray
    edge_kind: Tuple[str, ...]
    branch_word: Tuple[str, ...]
    has_level_paths: bool = True

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def depth(self) -> int:
        return self.h * self.k

    @cached_property
    def tree_mask(self) -> np.ndarray:
        return _frozen(np.array([kind == TREE_EDGE for kind in self.edge_kind], dtype=bool))

    def tree_edges(self) -> np.ndarray:
        return self.graph.edges[self.tree_mask]

    def path_edges(self) -> np.ndarray:
        return self.graph.edges[~self.tree_mask]

    @cached_property
    def level_sizes(self) -> np.ndarray:
        return _frozen(np.bincount(self.level, minlength=self.depth + 1))

    def level_sets(self) -> List[np.ndarray]:
        """V_0, ..., V_hk as sorted id arrays"""
        order = np.argsort(self.level, kind='stable')
        bounds = np.concatenate([[0], np.cumsum(self.level_sizes)])
        return [order[bounds[l]:bounds[l + 1]] for l in range(self.depth + 1)]

    def leftmost_deepest_leaf(self) -> int:
        return int(np.flatnonzero(self.level == self.depth)[0])

    def child_counts(self) -> np.ndarray:
        """Number of tree-edge neighbors one level further from the root"""
        tree = self.tree_edges()
        lower = np.where(self.level[tree[:, 0]] < self.level[tree[:, 1]], tree[:, 0], tree[:, 1])
        return np.bincount(lower, minlength=self.n)

    def validate(self) -> None:
        """Check the structural invariants; raises InvalidInputError on the first violation"""
        from .constructions import count_formulas  # local import, constructions imports this module

        G = self.graph
        if not G.is_unit_weighted():
            raise InvalidInputError("hat tree must carry unit vertex and edge weights")
        if len(self.edge_kind) != G.m or len(self.branch_word) != G.n or self.level.shape != (G.n,):
            raise InvalidInputError("per-vertex / per-edge labels do not match the graph")

        sizes = self.level_sizes
        expected = [1] + [2 ** -(-l // self.k) for l in range(1, self.depth + 1)]
        if sizes.tolist() != expected:
            raise InvalidInputError(f"level sizes {sizes.tolist()} differ from {expected}")

        n_expected, m_expected = count_formulas(self.h, self.k)
        tree_count = int(self.tree_mask.sum())
        if G.n != n_expected or tree_count != n_expected - 1:
            raise InvalidInputError(f"counts n={G.n}, tree edges={tree_count} do not match the closed forms")
        if self.has_level_paths and G.m != m_expected:
            raise InvalidInputError(f"edge count {G.m} differs from closed form {m_expected}")

        lu, lv = self.level[G.edges[:, 0]], self.level[G.edges[:, 1]]
        tree = self.tree_mask
        if np.any(np.abs(lu[tree] - lv[tree]) != 1) or np.any(lu[~tree] != lv[~tree]):
            raise InvalidInputError("edge kinds inconsistent with levels")

        # exactly one parent per non-root vertex
        tree_edges = G.edges[tree]
        upper = np.where(lu[tree] > lv[tree], tree_edges[:, 0], tree_edges[:, 1])
        parents = np.bincount(upper, minlength=G.n)
        if parents[self.root] != 0 or np.any(np.delete(parents, self.root) != 1):
            raise InvalidInputError("some vertex does not have exactly one parent")

        # path edges join consecutive members of a level in branch-word order
        for ids in self.level_sets():
            words = [self.branch_word[x] for x in ids]
            if words != sorted(words):
                raise InvalidInputError("vertex ids are not in branch-word order within a level")
        for u, v in self.path_edges():
            if abs(int(u) - int(v)) != 1:
                raise InvalidInputError(f"path edge {u}-{v} joins non-consecutive level members")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HatTree):
            return NotImplemented
        return (self.graph == other.graph and (self.h, self.k, self.root) == (other.h, other.k, other.root)
                and np.array_equal(self.level, other.level)
                and self.edge_kind == other.edge_kind
                and self.branch_word == other.branch_word
                and self.has_level_paths == other.has_level_paths)

    __hash__ = None  # type: ignore[assignment]

    def to_meta(self) -> Dict[str, int]:
        return {'h': self.h, 'k': self.k, 'root': self.root}

    def __repr__(self) -> str:
        return f"HatTree(h={self.h}, k={self.k}, n={self.n}, m={self.graph.m})"


@dataclass(frozen=True, eq=False)
class QuotientChain:
    """Weighted path on positions 0..m; provenance 'Q_h' or 'Q_hk'"""
    graph: WeightedGraph
    provenance: str
    h: int
    k: int = 1

    @property
    def length(self) -> int:
        return self.graph.n - 1

    def same_weighted_graph(self, other: 'QuotientChain') -> bool:
        return self.graph == other.graph

    def __repr__(self) -> str:
        return f"QuotientChain({self.provenance}, h={self.h}, k={self.k}, n={self.graph.n})"


GraphLike = Union[WeightedGraph, HatTree, QuotientChain]


def as_weighted_graph(obj: GraphLike) -> WeightedGraph:
    """Unwrap a HatTree / QuotientChain to its WeightedGraph"""
    if isinstance(obj, WeightedGraph):
        return obj
    if isinstance(obj, (HatTree, QuotientChain)):
        return obj.graph
    raise InvalidInputError(f"expected a graph, got {type(obj).__name__}")
