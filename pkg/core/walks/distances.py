"""
Path-metric statistics: BFS distances, diameter and mean squared distance
"""
import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

import numpy as np
from scipy.sparse.csgraph import shortest_path

from ..errors import InvalidInputError, InvalidParameterError, SizeLimitError
from ..graphs.weighted_graph import GraphLike, as_weighted_graph

logger = logging.getLogger('planar_gap.walks.distances')

EXACT_MAX_VERTICES = 50_000
DEFAULT_SAMPLE_PAIRS = 2000
# distance entries held in memory per BFS block
_BLOCK_ENTRIES = 4_000_000


@dataclass
class DistanceStats:
    """Diameter and mean squared distance over ordered pairs (x = y included)"""
    diameter: int
    avg_sq_distance: float
    avg_distance: float
    mode: str
    sample_pairs: int
    seed: int
    # standard error of avg_sq_distance, sampled mode only
    std_error: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def bfs_distances(G: GraphLike, src: int) -> np.ndarray:
    """Hop distances from src; unreachable vertices are marked -1"""
    graph = as_weighted_graph(G)
    if not 0 <= src < graph.n:
        raise InvalidParameterError(f"source {src} out of range [0, {graph.n})")
    dist = shortest_path(graph.adjacency, directed=False, unweighted=True, indices=int(src))
    unreachable = ~np.isfinite(dist)
    if unreachable.any():
        logger.warning(f"{int(unreachable.sum())} vertices unreachable from {src}")
    out = np.where(unreachable, -1, dist).astype(np.int64)
    return out


def eccentricity(G: GraphLike, src: int) -> int:
    dist = bfs_distances(G, src)
    if np.any(dist < 0):
        raise InvalidInputError("eccentricity is infinite on a disconnected graph")
    return int(dist.max())


def _distance_rows(graph, sources: np.ndarray):
    """Yield BFS distance blocks (len(block) x n) for the given sources"""
    block = max(1, _BLOCK_ENTRIES // graph.n)
    for start in range(0, len(sources), block):
        rows = shortest_path(graph.adjacency, directed=False, unweighted=True,
                             indices=sources[start:start + block])
        if not np.all(np.isfinite(rows)):
            raise InvalidInputError("distance statistics need a connected graph")
        yield np.atleast_2d(rows)


def distance_stats(G: GraphLike, mode: str = 'exact', sample_pairs: int = DEFAULT_SAMPLE_PAIRS,
                   seed: int = 0, max_vertices: int = EXACT_MAX_VERTICES) -> DistanceStats:
    """
    Diameter and |V|^-2 sum_{x,y} d(x,y)^2.

    'exact' runs BFS from every vertex. 'sampled' draws ordered pairs
    uniformly with replacement; its diameter is the largest eccentricity among
    the sampled sources, a lower bound.
    """
    graph = as_weighted_graph(G)
    n = graph.n

    if mode == 'exact':
        if n > max_vertices:
            raise SizeLimitError(f"exact all-pairs BFS limited to n <= {max_vertices}, got n={n}")
        diameter = 0
        total_sq = 0.0
        total = 0.0
        for rows in _distance_rows(graph, np.arange(n)):
            diameter = max(diameter, int(rows.max()))
            total_sq += float(np.square(rows).sum())
            total += float(rows.sum())
        return DistanceStats(diameter=diameter, avg_sq_distance=total_sq / n ** 2,
                             avg_distance=total / n ** 2, mode='exact', sample_pairs=n * n, seed=seed)

    if mode != 'sampled':
        raise InvalidParameterError(f"unknown distance mode {mode!r}; expected 'exact' or 'sampled'")
    if sample_pairs < 2:
        raise InvalidParameterError(f"sampled mode needs at least 2 pairs, got {sample_pairs}")

    rng = np.random.default_rng(seed)
    xs = rng.integers(n, size=sample_pairs)
    ys = rng.integers(n, size=sample_pairs)
    sources, inverse = np.unique(xs, return_inverse=True)
    sq = np.empty(sample_pairs)
    d = np.empty(sample_pairs)
    diameter = 0
    offset = 0
    for rows in _distance_rows(graph, sources):
        diameter = max(diameter, int(rows.max()))
        picked = (inverse >= offset) & (inverse < offset + len(rows))
        values = rows[inverse[picked] - offset, ys[picked]]
        d[picked] = values
        sq[picked] = values ** 2
        offset += len(rows)

    std_error = float(sq.std(ddof=1) / np.sqrt(sample_pairs))
    logger.debug(f"Sampled {sample_pairs} pairs from {len(sources)} sources: "
                 f"avg d^2 = {sq.mean():.6g} +/- {std_error:.2g}")
    return DistanceStats(diameter=diameter, avg_sq_distance=float(sq.mean()),
                         avg_distance=float(d.mean()), mode='sampled',
                         sample_pairs=int(sample_pairs), seed=seed, std_error=std_error)


def weighted_sq_distance(G: GraphLike, weights: Any, max_vertices: int = EXACT_MAX_VERTICES) -> float:
    """sum_{x,y} p(x) p(y) d(x,y)^2 for a vertex weighting p"""
    graph = as_weighted_graph(G)
    p = graph.check_vector(weights, "vertex weighting")
    if graph.n > max_vertices:
        raise SizeLimitError(f"all-pairs distances limited to n <= {max_vertices}, got n={graph.n}")
    total = 0.0
    offset = 0
    for rows in _distance_rows(graph, np.arange(graph.n)):
        total += float(p[offset:offset + len(rows)] @ np.square(rows) @ p)
        offset += len(rows)
    return total
