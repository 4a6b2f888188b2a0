"""
Whole-graph certificates: diameter and gap bounds for hat trees, Lipschitz
upper bounds, and the gap times mean squared distance products
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..errors import InvalidInputError, InvalidMapError
from ..graphs.constructions import build_hat_tree, build_weighted_chain
from ..graphs.weighted_graph import GraphLike, HatTree, as_weighted_graph
from ..spectral.cheeger import EXACT_MAX_VERTICES as CHEEGER_MAX_VERTICES
from ..spectral.cheeger import verify_cheeger_inequality
from ..spectral.eigensolver import lambda1, normalized_lambda1
from ..walks.distances import bfs_distances, distance_stats, weighted_sq_distance
from ..walks.mixing import stationary_distribution
from .certificate import DEFAULT_REL_TOL, CertificateReport, certify
from .chain_checks import check_qh_gap, check_subdivision_scaling
from .level_checks import DEFAULT_SEED, DEFAULT_TRIALS, run_randomized_suite

logger = logging.getLogger('planar_gap.verify.theorems')

# allowed growth of the product between consecutive heights
TREND_FACTOR = 2.0
_LIPSCHITZ_SLACK = 1e-12


def default_k(h: int) -> int:
    return 2 ** h


def theorem1_certificate(h: int, k: Optional[int] = None, rel_tol: float = DEFAULT_REL_TOL,
                         **solver_options) -> List[CertificateReport]:
    """
    diam >= hk, lambda_1 >= 1/(7k^2), and 1/(7k^2) >= (log2(diam) / (6 diam))^2
    on the hat tree with parameters (h, k).
    """
    k = default_k(h) if k is None else k
    T = build_hat_tree(h, k)
    stats = distance_stats(T, mode='exact')
    diam = stats.diameter
    root_ecc = int(bfs_distances(T, T.root).max())
    spectrum = lambda1(T, **solver_options)
    gap_bound = 1.0 / (7.0 * k ** 2)
    log_term = (math.log2(diam) / (6.0 * diam)) ** 2 if diam > 0 else 0.0

    logger.info(f"Hat tree h={h} k={k}: n={T.n} diam={diam} lambda1={spectrum.lambda1:.6e} "
                f"bound={gap_bound:.6e}")
    return [
        certify('diam_bound', diam, h * k, h=h, k=k, rel_tol=rel_tol,
                details={'root_eccentricity': root_ecc}, require=root_ecc == h * k),
        certify('theorem1_gap', spectrum.lambda1, gap_bound, h=h, k=k, rel_tol=rel_tol,
                details={'residual': spectrum.residual, 'solver': spectrum.solver, 'n': T.n}),
        certify('theorem1_logdiam', gap_bound, log_term, h=h, k=k, rel_tol=rel_tol,
                details={'diameter': diam}),
    ]


def canonical_lipschitz_maps(T: HatTree) -> Dict[str, np.ndarray]:
    """Distance to the root and to the leftmost deepest leaf, both 1-Lipschitz"""
    if not isinstance(T, HatTree):
        raise InvalidInputError(f"canonical maps need a HatTree, got {type(T).__name__}")
    return {
        'distance_to_root': bfs_distances(T, T.root).astype(np.float64),
        'distance_to_deepest_leaf': bfs_distances(T, T.leftmost_deepest_leaf()).astype(np.float64),
    }


def check_lipschitz(G: GraphLike, f: Any) -> None:
    """Raise InvalidMapError at the first edge where f jumps by more than 1"""
    graph = as_weighted_graph(G)
    f = graph.check_vector(f, "map")
    jumps = np.abs(f[graph.edges[:, 0]] - f[graph.edges[:, 1]])
    bad = np.flatnonzero(jumps > 1.0 + _LIPSCHITZ_SLACK)
    if bad.size:
        i = int(bad[0])
        raise InvalidMapError((int(graph.edges[i, 0]), int(graph.edges[i, 1])), float(jumps[i]))


def lipschitz_upper_bound(G: GraphLike, f: Any, lambda1_value: Optional[float] = None,
                          rel_tol: float = DEFAULT_REL_TOL,
                          **solver_options) -> Tuple[float, CertificateReport]:
    """
    Rayleigh-quotient upper bound on lambda_1 from a 1-Lipschitz map.

    With unit weights this is sum_E (df)^2 / ((2|V|)^-1 sum_{x,y} (f(x) - f(y))^2);
    in general the denominator is the pi-variance of f.
    """
    graph = as_weighted_graph(G)
    f = graph.check_vector(f, "map")
    if np.ptp(f) == 0:
        raise InvalidInputError("Lipschitz bound needs a non-constant map")
    check_lipschitz(graph, f)

    pi = graph.vertex_weight
    centered = f - np.dot(pi, f) / pi.sum()
    bound = graph.dirichlet_form(f) / float(np.dot(pi, centered * centered))
    if lambda1_value is None:
        lambda1_value = lambda1(graph, **solver_options).lambda1
    h = G.h if isinstance(G, HatTree) else None
    k = G.k if isinstance(G, HatTree) else None
    report = certify('lipschitz_bound', bound, lambda1_value, h=h, k=k, rel_tol=rel_tol,
                     details={'n': graph.n})
    return bound, report


@dataclass
class Theorem2Products:
    """lambda_1 times mean squared distance, uniform and stationary versions"""
    product_u: float
    product_pi: float
    lambda1: float
    normalized_lambda1: float
    avg_sq_distance: float
    stationary_sq_distance: float
    diameter: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def theorem2_product(G: GraphLike, mode: str = 'exact', sample_pairs: int = 2000, seed: int = 0,
                     **solver_options) -> Theorem2Products:
    """
    P_u = lambda_1(L) |V|^-2 sum d^2 and P_pi = lambda_1(normalized) sum pi(x) pi(y) d^2.

    The constant bounding these is not known; they are computed and logged.
    P_pi always uses exact all-pairs distances.
    """
    graph = as_weighted_graph(G)
    stats = distance_stats(graph, mode=mode, sample_pairs=sample_pairs, seed=seed)
    gap = lambda1(graph, **solver_options).lambda1
    walk_gap = normalized_lambda1(graph, **solver_options).lambda1
    stationary_sq = weighted_sq_distance(graph, stationary_distribution(graph))
    products = Theorem2Products(
        product_u=gap * stats.avg_sq_distance, product_pi=walk_gap * stationary_sq, lambda1=gap,
        normalized_lambda1=walk_gap, avg_sq_distance=stats.avg_sq_distance,
        stationary_sq_distance=stationary_sq, diameter=stats.diameter,
    )
    logger.info(f"Products on n={graph.n}: P_u={products.product_u:.6g} P_pi={products.product_pi:.6g}")
    return products


def check_product_trend(products: Dict[int, float], k: Optional[int] = None,
                        rel_tol: float = DEFAULT_REL_TOL) -> CertificateReport:
    """Largest ratio of consecutive products (by h) must stay <= 2"""
    heights = sorted(products)
    if len(heights) < 2:
        raise InvalidInputError("trend check needs products for at least two heights")
    ratios = {f"{a}->{b}": products[b] / products[a] for a, b in zip(heights, heights[1:])}
    worst = max(ratios.values())
    return certify('theorem2_product', TREND_FACTOR, worst, h=heights[-1], k=k, rel_tol=rel_tol,
                   details={'products': {str(h): products[h] for h in heights}, 'ratios': ratios})


def require_agreement(reports: List[CertificateReport], claim: str = 'rayleigh_bound',
                      reference: str = 'theorem1_gap') -> bool:
    """Fail `claim` when its verdict differs from `reference`; True when both are present and agree"""
    by_claim = {r.claim: r for r in reports}
    if claim not in by_claim or reference not in by_claim:
        return False
    report, ref = by_claim[claim], by_claim[reference]
    agree = report.passed == ref.passed
    report.details[f'agrees_with_{reference}'] = agree
    if not agree:
        logger.warning(f"{claim} ({report.passed}) disagrees with {reference} ({ref.passed}) "
                       f"for h={report.h} k={report.k}")
        report.passed = False
    return agree


def verify_all(h: int, k: Optional[int] = None, trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED,
               rel_tol: float = DEFAULT_REL_TOL, workers: int = 1, chain_tolerance: float = 1e-10,
               **solver_options) -> List[CertificateReport]:
    """
    The full certificate list for one (h, k), k = 2^h by default.

    Runs the hat-tree theorem checks, the Q_h bounds, subdivision scaling,
    the randomized level suite, the Cheeger inequality on Q_h, Lipschitz
    bounds from the canonical maps and, in the k = 2^h regime with h >= 3,
    the product trend over heights h-1 and h.
    """
    k = default_k(h) if k is None else k
    reports: List[CertificateReport] = []
    reports.extend(theorem1_certificate(h, k, rel_tol=rel_tol, **solver_options))
    reports.extend(check_qh_gap(h, tolerance=chain_tolerance, rel_tol=rel_tol))
    reports.append(check_subdivision_scaling(h, k, tolerance=chain_tolerance, rel_tol=rel_tol))

    T = build_hat_tree(h, k)
    reports.extend(run_randomized_suite(T, trials=trials, seed=seed, rel_tol=rel_tol, workers=workers))
    require_agreement(reports)

    chain = build_weighted_chain(h)
    if chain.graph.n <= CHEEGER_MAX_VERTICES:
        sandwich = verify_cheeger_inequality(chain, rel_tol=rel_tol)
        reports.append(certify('cheeger_eq1', sandwich.lambda1, sandwich.lower_bound, h=h,
                               rel_tol=rel_tol, details=sandwich.to_dict(), require=sandwich.passed))

    gap = lambda1(T, **solver_options).lambda1
    for name, f in canonical_lipschitz_maps(T).items():
        _, report = lipschitz_upper_bound(T, f, lambda1_value=gap, rel_tol=rel_tol)
        report.details['map'] = name
        reports.append(report)

    if h >= 3 and k == default_k(h):
        heights = [h - 1, h]
        with ThreadPoolExecutor(max_workers=max(1, min(workers, len(heights)))) as pool:
            values = list(pool.map(
                lambda hh: theorem2_product(build_hat_tree(hh, default_k(hh)), **solver_options).product_u,
                heights))
        reports.append(check_product_trend(dict(zip(heights, values)), k=k, rel_tol=rel_tol))

    for report in reports:
        if report.seed is None:
            report.seed = seed
    failing = [r.claim for r in reports if not r.passed]
    if failing:
        logger.warning(f"verify h={h} k={k}: failing claims {failing}")
    else:
        logger.info(f"verify h={h} k={k}: all {len(reports)} claims pass")
    return reports
