"""
Cheeger constant: exact subset enumeration, sweep cuts, and the discrete Cheeger inequality
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..errors import InvalidInputError, SizeLimitError
from ..graphs.weighted_graph import GraphLike, as_weighted_graph
from .eigensolver import lambda1

logger = logging.getLogger('planar_gap.spectral.cheeger')

EXACT_MAX_VERTICES = 24
# subsets per vectorized enumeration block
_CHUNK_BITS = 15
_TIE_RTOL = 1e-12


@dataclass
class CheegerReport:
    """h(G) with a witness set S, pi(S) <= pi(V)/2"""
    value: float
    witness: Tuple[int, ...]
    method: str
    cut_weight: float
    mass: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'value': self.value,
            'witness': list(self.witness),
            'method': self.method,
            'cut_weight': self.cut_weight,
            'mass': self.mass,
        }


@dataclass
class CheegerInequalityReport:
    """Both sides of h^2 / (2 d_max) <= lambda_1 <= 2h"""
    lambda1: float
    cheeger: float
    d_max: float
    lower_bound: float
    upper_bound: float
    margin: float
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            'lambda1': self.lambda1,
            'cheeger': self.cheeger,
            'd_max': self.d_max,
            'lower_bound': self.lower_bound,
            'upper_bound': self.upper_bound,
            'margin': self.margin,
            'pass': self.passed,
        }


def cut_weight(G: GraphLike, subset) -> float:
    """Total weight of edges with exactly one endpoint in S"""
    graph = as_weighted_graph(G)
    inside = np.zeros(graph.n, dtype=bool)
    inside[np.fromiter(subset, dtype=np.int64)] = True
    crossing = inside[graph.edges[:, 0]] != inside[graph.edges[:, 1]]
    return float(graph.edge_weight[crossing].sum())


def _report(graph, witness: Tuple[int, ...], method: str) -> CheegerReport:
    cut = cut_weight(graph, witness)
    mass = graph.mass(witness)
    return CheegerReport(value=cut / mass, witness=witness, method=method, cut_weight=cut, mass=mass)


def _pick_witness(candidates: List[Tuple[float, Tuple[int, ...]]]) -> Tuple[int, ...]:
    """Smallest ratio, ties (relative 1e-12) broken by the lexicographically smallest set"""
    best = min(r for r, _ in candidates)
    ties = [s for r, s in candidates if r <= best * (1 + _TIE_RTOL) + 1e-300]
    return min(ties)


def _mask_to_set(mask: int, n: int) -> Tuple[int, ...]:
    return tuple(x for x in range(n) if mask >> x & 1)


def cheeger_exact(G: GraphLike, max_vertices: int = EXACT_MAX_VERTICES) -> CheegerReport:
    """
    Minimum of cut(S) / pi(S) over all nonempty S with pi(S) <= pi(V)/2.

    Enumerates all 2^n subsets in vectorized blocks, so n is capped at
    `max_vertices`.
    """
    graph = as_weighted_graph(G)
    n = graph.n
    if n > max_vertices:
        raise SizeLimitError(f"exact Cheeger enumeration limited to n <= {max_vertices}, got n={n}")
    if n < 2:
        raise InvalidInputError("Cheeger constant needs at least two vertices")

    pi = graph.vertex_weight
    half = graph.total_mass() / 2.0
    W = graph.adjacency.toarray()
    deg = graph.weighted_degree
    shifts = np.arange(n, dtype=np.int64)
    chunk = 1 << min(_CHUNK_BITS, n)

    best = np.inf
    candidates: List[Tuple[float, int]] = []
    for start in range(1, 1 << n, chunk):
        masks = np.arange(start, min(start + chunk, 1 << n), dtype=np.int64)
        X = ((masks[:, None] >> shifts) & 1).astype(np.float64)
        mass = X @ pi
        # cut(S) = sum_{x in S} deg_w(x) - 2 w(E(S))
        cut = X @ deg - np.einsum('ij,ij->i', X @ W, X)
        ratio = np.where(mass <= half * (1 + _TIE_RTOL), cut / mass, np.inf)
        low = ratio.min()
        if not np.isfinite(low) or low > best * (1 + _TIE_RTOL):
            continue
        if low < best:
            best = low
            candidates = [(r, s) for r, s in candidates if r <= best * (1 + _TIE_RTOL)]
        keep = np.flatnonzero(ratio <= best * (1 + _TIE_RTOL))
        candidates.extend((float(ratio[i]), int(masks[i])) for i in keep)

    if not candidates:
        raise InvalidInputError("no subset with pi(S) <= pi(V)/2")
    witness = _pick_witness([(r, _mask_to_set(s, n)) for r, s in candidates])
    report = _report(graph, witness, 'exact')
    logger.debug(f"Exact Cheeger over {(1 << n) - 1} subsets: h={report.value:.12g} S={witness}")
    return report


def cheeger_sweep(G: GraphLike, f: Any) -> CheegerReport:
    """
    Best threshold cut {x : f(x) <= t} along the sorted values of f.

    Each threshold is scored on its smaller-mass side, so the result is an
    upper bound on h(G).
    """
    graph = as_weighted_graph(G)
    f = graph.check_vector(f)
    if np.ptp(f) == 0:
        raise InvalidInputError("sweep cut needs a non-constant vector")

    n = graph.n
    order = np.lexsort((np.arange(n), f))
    position = np.empty(n, dtype=np.int64)
    position[order] = np.arange(n)

    # an edge crosses every prefix of size in (min position, max position]
    pu, pv = position[graph.edges[:, 0]], position[graph.edges[:, 1]]
    delta = np.zeros(n + 1)
    np.add.at(delta, np.minimum(pu, pv) + 1, graph.edge_weight)
    np.add.at(delta, np.maximum(pu, pv) + 1, -graph.edge_weight)
    cut = np.cumsum(delta)[1:n]

    prefix_mass = np.cumsum(graph.vertex_weight[order])[:-1]
    total = graph.total_mass()
    small = np.minimum(prefix_mass, total - prefix_mass)
    sorted_f = f[order]
    valid = sorted_f[:-1] < sorted_f[1:]
    ratio = np.where(valid, cut / small, np.inf)

    low = ratio.min()
    candidates = []
    for i in np.flatnonzero(ratio <= low * (1 + _TIE_RTOL)):
        size = i + 1
        prefix = tuple(sorted(order[:size].tolist()))
        rest = tuple(sorted(order[size:].tolist()))
        if prefix_mass[i] < total - prefix_mass[i]:
            candidates.append((float(ratio[i]), prefix))
        elif prefix_mass[i] > total - prefix_mass[i]:
            candidates.append((float(ratio[i]), rest))
        else:
            candidates.extend([(float(ratio[i]), prefix), (float(ratio[i]), rest)])
    return _report(graph, _pick_witness(candidates), 'sweep')


def verify_cheeger_inequality(G: GraphLike, tolerance: float = 1e-10,
                              max_vertices: int = EXACT_MAX_VERTICES,
                              rel_tol: float = 1e-9) -> CheegerInequalityReport:
    """
    lambda_1 - h(G)^2 / (2 d_max), with exact h and a dense eigensolve.

    The report also carries the easy side lambda_1 <= 2 h(G).
    """
    graph = as_weighted_graph(G)
    h = cheeger_exact(graph, max_vertices=max_vertices).value
    value = lambda1(graph, solver='dense', tolerance=tolerance).lambda1
    d_max = float(np.max(graph.weighted_degree / graph.vertex_weight))
    lower = h * h / (2.0 * d_max)
    upper = 2.0 * h
    margin = value - lower
    scale = max(abs(value), abs(lower), 1.0)
    passed = margin >= -rel_tol * scale and value - upper <= rel_tol * scale
    if not passed:
        logger.warning(f"Cheeger sandwich violated: {lower:.12g} <= {value:.12g} <= {upper:.12g} fails")
    return CheegerInequalityReport(lambda1=value, cheeger=h, d_max=d_max, lower_bound=lower,
                                   upper_bound=upper, margin=margin, passed=passed)


def cheeger_bounds(G: GraphLike, **options) -> Tuple[float, float, float]:
    """(h^2 / (2 d_max), lambda_1, 2 h)"""
    report = verify_cheeger_inequality(G, **options)
    return report.lower_bound, report.lambda1, report.upper_bound
