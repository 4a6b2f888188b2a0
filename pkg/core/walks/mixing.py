"""
Lazy simple random walk: stationary law, exact and Monte-Carlo TV mixing, relaxation time

The walk stays put with probability 1/2 and otherwise moves to a neighbor
chosen proportionally to w(x, y); every MixingReport says so (`lazy=True`).
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import scipy.sparse as sp

from ..errors import (
    DimensionMismatchError, InvalidDistributionError, InvalidInputError, InvalidParameterError,
    SizeLimitError,
)
from ..graphs.weighted_graph import GraphLike, HatTree, as_weighted_graph
from ..spectral.eigensolver import normalized_lambda1
from .distances import bfs_distances

logger = logging.getLogger('planar_gap.walks.mixing')

DEFAULT_EPS = 0.25
EXACT_MAX_VERTICES = 2000
DEFAULT_WALKERS = 100_000
DEFAULT_RANDOM_STARTS = 8
# walkers per independently seeded block
WALKER_BLOCK = 10_000
START_POLICIES = ('extremes', 'root', 'worst_sampled')
_MASS_TOL = 1e-9


@dataclass
class MixingReport:
    """TV trajectory and t_mix(eps) of the lazy walk"""
    epsilon: float
    t_mix: int
    method: str
    start_policy: str
    starts: List[int]
    tv_trajectory: List[Tuple[int, float]] = field(repr=False)
    relaxation_time: Optional[float]
    t_max: int
    cap_reached: bool = False
    lazy: bool = True
    seed: int = 0
    walkers: Optional[int] = None
    # Monte-Carlo only: expected upward bias of empirical TV is at most this
    tv_bias_bound: Optional[float] = None
    relaxation_convention: str = 'non-lazy normalized Laplacian gap'

    def to_dict(self, trajectory: bool = True) -> Dict[str, Any]:
        data = {
            'epsilon': self.epsilon,
            't_mix': self.t_mix,
            'method': self.method,
            'start_policy': self.start_policy,
            'starts': list(self.starts),
            'relaxation_time': self.relaxation_time,
            't_max': self.t_max,
            'cap_reached': self.cap_reached,
            'lazy': self.lazy,
            'seed': self.seed,
            'walkers': self.walkers,
            'tv_bias_bound': self.tv_bias_bound,
            'relaxation_convention': self.relaxation_convention,
        }
        if trajectory:
            data['tv_trajectory'] = [[int(t), float(tv)] for t, tv in self.tv_trajectory]
        return data


def stationary_distribution(G: GraphLike) -> np.ndarray:
    """pi(x) = deg_w(x) / sum deg_w"""
    graph = as_weighted_graph(G)
    deg = graph.weighted_degree
    if np.any(deg <= 0):
        raise InvalidInputError("stationary distribution needs every vertex to have an edge")
    return deg / deg.sum()


def lazy_transition_matrix(G: GraphLike) -> sp.csr_matrix:
    """P = I/2 + D^-1 W / 2, row-stochastic"""
    graph = as_weighted_graph(G)
    deg = graph.weighted_degree
    if np.any(deg <= 0):
        raise InvalidInputError("random walk needs every vertex to have an edge")
    walk = sp.diags(0.5 / deg) @ graph.adjacency
    return (walk + sp.identity(graph.n, format='csr') * 0.5).tocsr()


def _check_distribution(graph, p: Any) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 1 or p.shape[0] != graph.n:
        raise DimensionMismatchError(graph.n, p.size, "distribution")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise InvalidDistributionError("distribution has negative or non-finite mass")
    if abs(p.sum() - 1.0) > _MASS_TOL:
        raise InvalidDistributionError(f"distribution sums to {p.sum():.12g}, expected 1")
    return p


def evolve_distribution(G: GraphLike, p: Any, t: int) -> np.ndarray:
    """p P^t for the lazy kernel"""
    graph = as_weighted_graph(G)
    p = _check_distribution(graph, p)
    if int(t) != t or t < 0:
        raise InvalidParameterError(f"step count must be a nonnegative integer, got {t}")
    forward = lazy_transition_matrix(graph).T.tocsr()
    for _ in range(int(t)):
        p = forward @ p
    return p


def tv_distance(p: Any, q: Any) -> float:
    """1/2 sum |p - q|"""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise DimensionMismatchError(p.size, q.size, "distribution")
    return float(0.5 * np.abs(p - q).sum())


def relaxation_time(G: GraphLike, **solver_options) -> float:
    """1 / lambda_1 of the normalized Laplacian (gap of the non-lazy walk)"""
    report = normalized_lambda1(G, **solver_options)
    if report.lambda1 <= 0:
        raise InvalidInputError("relaxation time is infinite on a disconnected graph")
    return 1.0 / report.lambda1


def default_t_max(G: GraphLike) -> int:
    if isinstance(G, HatTree):
        return 64 * G.h * G.k ** 2
    return 16 * as_weighted_graph(G).n ** 2


def start_vertices(G: GraphLike, policy: Union[str, int] = 'extremes', seed: int = 0,
                   random_starts: int = DEFAULT_RANDOM_STARTS,
                   large_n: int = EXACT_MAX_VERTICES) -> List[int]:
    """
    Start set for worst-case TV.

    'extremes' is {root, leftmost deepest leaf} (for plain graphs vertex 0 and
    the smallest vertex farthest from it), plus `random_starts` seeded random
    vertices when n > large_n. 'worst_sampled' always adds the random starts.
    An integer selects that single vertex.
    """
    graph = as_weighted_graph(G)
    if isinstance(policy, (int, np.integer)) and not isinstance(policy, bool):
        if not 0 <= policy < graph.n:
            raise InvalidParameterError(f"start vertex {policy} out of range [0, {graph.n})")
        return [int(policy)]
    if policy not in START_POLICIES:
        raise InvalidParameterError(f"unknown start policy {policy!r}; expected one of {START_POLICIES}")

    if isinstance(G, HatTree):
        root, far = G.root, G.leftmost_deepest_leaf()
    else:
        root = 0
        dist = bfs_distances(graph, root)
        far = int(np.argmax(dist))
    if policy == 'root':
        return [root]
    starts = [root, far]
    if policy == 'worst_sampled' or graph.n > large_n:
        rng = np.random.default_rng(seed)
        starts.extend(int(x) for x in rng.integers(graph.n, size=random_starts))
    return sorted(set(starts))


def _exact_trajectory(graph, starts: Sequence[int], eps: float, t_max: int):
    pi = stationary_distribution(graph)
    forward = lazy_transition_matrix(graph).T.tocsr()
    P = np.zeros((graph.n, len(starts)))
    P[list(starts), np.arange(len(starts))] = 1.0
    trajectory = []
    for t in range(t_max + 1):
        tv = float(0.5 * np.abs(P - pi[:, None]).sum(axis=0).max())
        trajectory.append((t, tv))
        if tv <= eps:
            return t, trajectory, False
        P = forward @ P
    return t_max, trajectory, True


def _neighbor_sampler(graph):
    """Vectorized draw of a w-proportional neighbor via CSR cumulative weights"""
    A = graph.adjacency
    cumulative = np.cumsum(A.data)
    before = np.concatenate([[0.0], cumulative])[A.indptr[:-1]]
    deg = graph.weighted_degree
    last = A.indptr[1:] - 1

    def step(x: np.ndarray, u: np.ndarray) -> np.ndarray:
        target = before[x] + u * deg[x]
        idx = np.minimum(np.searchsorted(cumulative, target, side='right'), last[x])
        return A.indices[idx]

    return step


def _monte_carlo_trajectory(graph, starts: Sequence[int], eps: float, t_max: int,
                            walkers: int, seed: int):
    pi = stationary_distribution(graph)
    step = _neighbor_sampler(graph)
    blocks = -(-walkers // WALKER_BLOCK)
    # one generator per (seed, start, block) keeps results independent of any work split
    rngs = [[np.random.default_rng([seed, s, b]) for b in range(blocks)] for s in range(len(starts))]
    sizes = [min(WALKER_BLOCK, walkers - b * WALKER_BLOCK) for b in range(blocks)]
    positions = [[np.full(size, x, dtype=np.int64) for size in sizes] for x in starts]

    trajectory = []
    for t in range(t_max + 1):
        worst = 0.0
        for per_start in positions:
            counts = np.bincount(np.concatenate(per_start), minlength=graph.n)
            worst = max(worst, float(0.5 * np.abs(counts / walkers - pi).sum()))
        trajectory.append((t, worst))
        if worst <= eps:
            return t, trajectory, False
        for s, per_start in enumerate(positions):
            for b, x in enumerate(per_start):
                rng = rngs[s][b]
                move = rng.random(len(x)) < 0.5
                if move.any():
                    x[move] = step(x[move], rng.random(int(move.sum())))
    return t_max, trajectory, True


def mixing_time(G: GraphLike, eps: float = DEFAULT_EPS, method: str = 'auto',
                start_policy: Union[str, int] = 'extremes', seed: int = 0,
                t_max: Optional[int] = None, walkers: int = DEFAULT_WALKERS,
                random_starts: int = DEFAULT_RANDOM_STARTS,
                exact_max_vertices: int = EXACT_MAX_VERTICES,
                with_relaxation: bool = True, **solver_options) -> MixingReport:
    """
    Least t with max over the start set of TV(delta_x P^t, pi) <= eps.

    'exact' evolves the start distributions (n <= exact_max_vertices);
    'monte_carlo' estimates TV from walker occupancy, which is biased upward
    by at most `tv_bias_bound`. Hitting t_max sets `cap_reached`.
    """
    graph = as_weighted_graph(G)
    if not 0 < eps < 1:
        raise InvalidParameterError(f"eps must lie in (0, 1), got {eps}")
    if graph.n < 2 or not graph.is_connected():
        raise InvalidInputError("mixing time needs a connected graph with at least two vertices")
    if method == 'auto':
        method = 'exact' if graph.n <= exact_max_vertices else 'monte_carlo'
    if method not in ('exact', 'monte_carlo'):
        raise InvalidParameterError(f"unknown mixing method {method!r}")
    t_max = default_t_max(G) if t_max is None else int(t_max)
    if t_max < 0:
        raise InvalidParameterError(f"t_max must be nonnegative, got {t_max}")

    starts = start_vertices(G, start_policy, seed=seed, random_starts=random_starts,
                            large_n=exact_max_vertices)
    bias = None
    if method == 'exact':
        if graph.n > exact_max_vertices:
            raise SizeLimitError(f"exact mixing limited to n <= {exact_max_vertices}, got n={graph.n}")
        t_mix, trajectory, capped = _exact_trajectory(graph, starts, eps, t_max)
        walker_count = None
    else:
        if walkers < 1:
            raise InvalidParameterError(f"walkers must be positive, got {walkers}")
        t_mix, trajectory, capped = _monte_carlo_trajectory(graph, starts, eps, t_max, walkers, seed)
        walker_count = walkers
        bias = float(0.5 * np.sqrt(graph.n / walkers))
        if bias > eps / 2:
            logger.warning(f"Monte-Carlo TV bias bound {bias:.3f} is large against eps={eps}")

    if capped:
        logger.warning(f"TV still above eps={eps} at t_max={t_max}; reporting the cap")
    relax = relaxation_time(graph, **solver_options) if with_relaxation else None
    policy_name = str(start_policy)
    logger.info(f"Mixing ({method}): t_mix={t_mix} from starts {starts}"
                + (f", relaxation={relax:.6g}" if relax is not None else ""))
    return MixingReport(epsilon=eps, t_mix=int(t_mix), method=method, start_policy=policy_name,
                        starts=starts, tv_trajectory=trajectory, relaxation_time=relax,
                        t_max=t_max, cap_reached=capped, seed=seed, walkers=walker_count,
                        tv_bias_bound=bias)


def trajectory_frame(report: MixingReport) -> pd.DataFrame:
    return pd.DataFrame(report.tv_trajectory, columns=['t', 'tv'])


def export_trajectory_csv(report: MixingReport, path: Union[str, Path]) -> Path:
    """Two-column CSV `t,tv`"""
    path = Path(path)
    trajectory_frame(report).to_csv(path, index=False)
    logger.info(f"Wrote TV trajectory ({len(report.tv_trajectory)} rows) to {path}")
    return path
