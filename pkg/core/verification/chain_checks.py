"""
Bounds on the weighted chains Q_h and their k-subdivisions
"""
import logging
from typing import Optional, Tuple

import numpy as np

from ..errors import InvalidInputError
from ..graphs.constructions import build_weighted_chain, subdivide_edges
from ..graphs.weighted_graph import GraphLike, QuotientChain, as_weighted_graph
from ..spectral.cheeger import EXACT_MAX_VERTICES, CheegerReport, cheeger_exact
from ..spectral.eigensolver import lambda1
from .certificate import DEFAULT_REL_TOL, CertificateReport, certify

logger = logging.getLogger('planar_gap.verify.chains')

CHAIN_TOLERANCE = 1e-10
SCALING_SLACK = 1e-6


def _is_path(graph) -> bool:
    return (graph.m == graph.n - 1
            and np.array_equal(graph.edges[:, 0], np.arange(graph.n - 1))
            and np.array_equal(graph.edges[:, 1], np.arange(1, graph.n)))


def chain_cheeger(G: GraphLike) -> CheegerReport:
    """
    Exact h(G) for a weighted path 0 - 1 - ... - m by scanning intervals.

    A set's ratio is at least the smallest ratio of its maximal intervals,
    whose cuts are disjoint, so some interval is optimal. Ties go to the
    lexicographically smallest interval.
    """
    graph = as_weighted_graph(G)
    if not _is_path(graph):
        raise InvalidInputError("interval Cheeger scan needs a path on 0..m")
    n = graph.n
    pi = graph.vertex_weight
    w = graph.edge_weight
    prefix = np.concatenate([[0.0], np.cumsum(pi)])
    half = prefix[-1] / 2.0

    best: Optional[Tuple[float, Tuple[int, ...], float, float]] = None
    for a in range(n):
        b = np.arange(a, n)
        mass = prefix[b + 1] - prefix[a]
        cut = (w[a - 1] if a > 0 else 0.0) + np.where(b < n - 1, w[np.minimum(b, n - 2)], 0.0)
        ok = mass <= half * (1 + 1e-12)
        if not ok.any():
            continue
        ratio = np.where(ok, cut / mass, np.inf)
        i = int(np.argmin(ratio))
        candidate = (float(ratio[i]), tuple(range(a, int(b[i]) + 1)), float(cut[i]), float(mass[i]))
        if best is None or candidate[0] < best[0] * (1 - 1e-12) or (
                candidate[0] <= best[0] * (1 + 1e-12) and candidate[1] < best[1]):
            best = candidate
    if best is None:
        raise InvalidInputError("no subset with pi(S) <= pi(V)/2")
    _, witness, cut, mass = best
    return CheegerReport(value=cut / mass, witness=witness, method='interval', cut_weight=cut, mass=mass)


def check_qh_gap(h: int, tolerance: float = CHAIN_TOLERANCE, rel_tol: float = DEFAULT_REL_TOL,
                 exact_max_vertices: int = EXACT_MAX_VERTICES) -> Tuple[CertificateReport, CertificateReport]:
    """
    lambda_1(Q_h) >= 1/6 and h(Q_h) >= 1.

    h(Q_h) comes from subset enumeration while h + 1 <= exact_max_vertices,
    otherwise from the exact interval scan.
    """
    chain = build_weighted_chain(h)
    spectrum = lambda1(chain, solver='dense', tolerance=tolerance)
    gap = certify('qh_gap', spectrum.lambda1, 1.0 / 6.0, h=h, rel_tol=rel_tol,
                  details={'residual': spectrum.residual})

    if chain.graph.n <= exact_max_vertices:
        cheeger = cheeger_exact(chain, max_vertices=exact_max_vertices)
    else:
        cheeger = chain_cheeger(chain)
    bound = certify('qh_cheeger', cheeger.value, 1.0, h=h, rel_tol=rel_tol,
                    details={'method': cheeger.method, 'witness': list(cheeger.witness)})
    logger.debug(f"Q_{h}: lambda1={spectrum.lambda1:.12g} cheeger={cheeger.value:.12g}")
    return gap, bound


def subdivision_ratio(h: int, k: int, tolerance: float = CHAIN_TOLERANCE,
                      **solver_options) -> Tuple[float, float, float]:
    """(rho, lambda_1(Q_h), lambda_1(Q_hk)) with rho = lambda_1(Q_hk) k^2 / lambda_1(Q_h)"""
    base: QuotientChain = build_weighted_chain(h)
    refined = subdivide_edges(base, k)
    small = lambda1(base, tolerance=tolerance, **solver_options).lambda1
    large = lambda1(refined, tolerance=tolerance, **solver_options).lambda1
    return large * k ** 2 / small, small, large


def check_subdivision_scaling(h: int, k: int, tolerance: float = CHAIN_TOLERANCE,
                              rel_tol: float = DEFAULT_REL_TOL, **solver_options) -> CertificateReport:
    """
    lambda_1(Q_hk) k^2 >= 1/6, the vertical bound the gap argument uses.

    rho = lambda_1(Q_hk) k^2 / lambda_1(Q_h) is recorded but not certified:
    it drops slightly below 1 from h = 4 on.
    """
    rho, small, large = subdivision_ratio(h, k, tolerance=tolerance, **solver_options)
    if rho < 1.0 - SCALING_SLACK:
        logger.warning(f"Subdivision ratio rho={rho:.9f} < 1 for h={h}, k={k}")
    return certify('subdivision_scaling', large * k ** 2, 1.0 / 6.0, h=h, k=k, rel_tol=rel_tol,
                   details={'rho': rho, 'lambda1_qh': small, 'lambda1_qhk': large})
