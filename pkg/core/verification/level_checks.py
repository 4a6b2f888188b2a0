"""
Level-set inequalities on hat trees: horizontal (level paths), vertical
(tree edges through the quotient chain) and the Jensen contraction
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional

import numpy as np

from ..errors import InvalidInputError, InvalidParameterError
from ..graphs.constructions import quotient_by_levels
from ..graphs.weighted_graph import HatTree
from ..spectral.laplacian import rayleigh_quotient
from .certificate import DEFAULT_REL_TOL, CertificateReport, certify, worst_of

logger = logging.getLogger('planar_gap.verify.levels')

DEFAULT_TRIALS = 1000
DEFAULT_SEED = 7


def _require_hat_tree(T: Any) -> HatTree:
    if not isinstance(T, HatTree):
        raise InvalidInputError(f"level checks need a HatTree, got {type(T).__name__}")
    return T


def hat_tree_levels(T: HatTree) -> List[np.ndarray]:
    """Level sets V_0, ..., V_hk"""
    return _require_hat_tree(T).level_sets()


def level_average(T: HatTree, f: Any) -> np.ndarray:
    """f-bar: mean of f over the level set of each vertex"""
    T = _require_hat_tree(T)
    f = T.graph.check_vector(f)
    means = np.bincount(T.level, weights=f, minlength=T.depth + 1) / T.level_sizes
    return means[T.level]


def _sq_diff_sum(edges: np.ndarray, f: np.ndarray) -> float:
    diff = f[edges[:, 0]] - f[edges[:, 1]]
    return float(np.dot(diff, diff))


def _centered(f: np.ndarray) -> np.ndarray:
    return f - f.mean()


def horizontal_form(T: HatTree, f: Any) -> float:
    """Sum over level-path edges of (f(x) - f(y))^2"""
    return _sq_diff_sum(T.path_edges(), T.graph.check_vector(f))


def tree_form(T: HatTree, f: Any) -> float:
    """Sum over tree edges of (f(x) - f(y))^2"""
    return _sq_diff_sum(T.tree_edges(), T.graph.check_vector(f))


def check_horizontal(T: HatTree, f: Any, seed: Optional[int] = None,
                     rel_tol: float = DEFAULT_REL_TOL) -> CertificateReport:
    """
    sum_{path edges} (df)^2 >= 2^-2h ||f - f-bar||^2.

    Every level has at most 2^h vertices, so this form holds for any k; the
    k^-2 form follows from it when k >= 2^h and is flagged in the details.
    """
    T = _require_hat_tree(T)
    f = T.graph.check_vector(f)
    spread = f - level_average(T, f)
    norm_sq = float(np.dot(spread, spread))
    lhs = horizontal_form(T, f)
    return certify('horizontal_eq2', lhs, norm_sq / 4.0 ** T.h, h=T.h, k=T.k, seed=seed,
                   rel_tol=rel_tol,
                   details={'k_form': T.k >= 2 ** T.h, 'rhs_k_form': norm_sq / T.k ** 2})


def check_horizontal_levels(T: HatTree, f: Any, seed: Optional[int] = None,
                            rel_tol: float = DEFAULT_REL_TOL) -> List[CertificateReport]:
    """Per level: sum_{P_l} (df)^2 >= |V_l|^-2 sum_{V_l} (f - f-bar)^2, for |V_l| >= 2"""
    T = _require_hat_tree(T)
    f = T.graph.check_vector(f)
    spread = f - level_average(T, f)
    path = T.path_edges()
    diff = f[path[:, 0]] - f[path[:, 1]]
    per_level_lhs = np.bincount(T.level[path[:, 0]], weights=diff * diff, minlength=T.depth + 1)
    per_level_var = np.bincount(T.level, weights=spread * spread, minlength=T.depth + 1)
    sizes = T.level_sizes
    reports = []
    for l in np.flatnonzero(sizes >= 2):
        reports.append(certify('horizontal_level', per_level_lhs[l], per_level_var[l] / sizes[l] ** 2,
                               h=T.h, k=T.k, seed=seed, rel_tol=rel_tol, details={'level': int(l)}))
    return reports


def check_vertical(T: HatTree, f: Any, seed: Optional[int] = None,
                   rel_tol: float = DEFAULT_REL_TOL) -> CertificateReport:
    """
    sum_{tree edges} (f-bar(x) - f-bar(y))^2 >= (6k^2)^-1 ||f-bar||^2, f centered first.

    The left side is recomputed on the quotient chain as
    sum_l |V_l+1| (m_l - m_l+1)^2 and must agree within 1e-9.
    """
    T = _require_hat_tree(T)
    f = _centered(T.graph.check_vector(f))
    fbar = level_average(T, f)
    lhs = tree_form(T, fbar)

    means = fbar[[int(ids[0]) for ids in T.level_sets()]]
    chain = quotient_by_levels(T).graph
    step = means[chain.edges[:, 0]] - means[chain.edges[:, 1]]
    quotient_lhs = float(np.dot(chain.edge_weight, step * step))
    agree = abs(lhs - quotient_lhs) <= 1e-9 * max(abs(lhs), abs(quotient_lhs), 1.0)
    if not agree:
        logger.error(f"Vertical form disagrees with its quotient: {lhs!r} vs {quotient_lhs!r}")

    rhs = float(np.dot(fbar, fbar)) / (6.0 * T.k ** 2)
    return certify('vertical_eq3', lhs, rhs, h=T.h, k=T.k, seed=seed, rel_tol=rel_tol,
                   details={'quotient_lhs': quotient_lhs, 'quotient_agrees': agree}, require=agree)


def uniform_child_counts(T: HatTree) -> bool:
    """Every vertex of a level has the same number of children"""
    T = _require_hat_tree(T)
    counts = T.child_counts()
    low = np.full(T.depth + 1, np.iinfo(np.int64).max)
    high = np.full(T.depth + 1, -1)
    np.minimum.at(low, T.level, counts)
    np.maximum.at(high, T.level, counts)
    return bool(np.all(low == high) and np.all(high <= 2))


def check_jensen(T: HatTree, f: Any, seed: Optional[int] = None,
                 rel_tol: float = DEFAULT_REL_TOL) -> CertificateReport:
    """sum_{tree edges} (df)^2 >= sum_{tree edges} (d f-bar)^2"""
    T = _require_hat_tree(T)
    f = T.graph.check_vector(f)
    uniform = uniform_child_counts(T)
    if not uniform:
        logger.error(f"Child counts vary inside a level of h={T.h} k={T.k}")
    return certify('jensen_eq4', tree_form(T, f), tree_form(T, level_average(T, f)),
                   h=T.h, k=T.k, seed=seed, rel_tol=rel_tol,
                   details={'uniform_child_counts': uniform}, require=uniform)


def check_combined(T: HatTree, f: Any, seed: Optional[int] = None,
                   rel_tol: float = DEFAULT_REL_TOL) -> CertificateReport:
    """
    Full Dirichlet form >= K^-2 (||f-bar||^2 / 6 + ||f - f-bar||^2) with K = max(k, 2^h),
    f centered first; the details carry the final (7K^2)^-1 ||f||^2 step and
    the Rayleigh quotient.
    """
    T = _require_hat_tree(T)
    f = _centered(T.graph.check_vector(f))
    fbar = level_average(T, f)
    spread = f - fbar
    K = max(T.k, 2 ** T.h)
    lhs = horizontal_form(T, f) + tree_form(T, f)
    middle = (float(np.dot(fbar, fbar)) / 6.0 + float(np.dot(spread, spread))) / K ** 2
    final = float(np.dot(f, f)) / (7.0 * K ** 2)
    details: Dict[str, Any] = {'effective_k': K, 'final_rhs': final,
                               'final_holds': middle >= final * (1 - rel_tol)}
    if float(np.dot(f, f)) > 0:
        details['rayleigh'] = rayleigh_quotient(T, f)
    return certify('combined_bound', lhs, middle, h=T.h, k=T.k, seed=seed, rel_tol=rel_tol,
                   details=details, require=details['final_holds'])


def random_centered_function(n: int, seed: int) -> np.ndarray:
    """Standard Gaussian entries centered to sum zero"""
    f = np.random.default_rng(seed).standard_normal(n)
    return f - f.mean()


def _one_trial(T: HatTree, trial_seed: int, rel_tol: float) -> Dict[str, CertificateReport]:
    f = random_centered_function(T.n, trial_seed)
    levels = check_horizontal_levels(T, f, seed=trial_seed, rel_tol=rel_tol)
    trial = {
        'horizontal_eq2': check_horizontal(T, f, seed=trial_seed, rel_tol=rel_tol),
        'vertical_eq3': check_vertical(T, f, seed=trial_seed, rel_tol=rel_tol),
        'jensen_eq4': check_jensen(T, f, seed=trial_seed, rel_tol=rel_tol),
        'combined_bound': check_combined(T, f, seed=trial_seed, rel_tol=rel_tol),
    }
    if levels:
        trial['horizontal_level'] = min(levels, key=lambda r: r.relative_margin)
    return trial


def run_randomized_suite(T: HatTree, trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED,
                         rel_tol: float = DEFAULT_REL_TOL, workers: int = 1) -> List[CertificateReport]:
    """
    Run the level inequalities on `trials` random centered functions.

    Trial i uses seed + i, so the aggregated reports do not depend on the
    worker count. One report per claim, carrying the worst trial.
    """
    T = _require_hat_tree(T)
    if trials < 1:
        raise InvalidParameterError(f"trials must be positive, got {trials}")
    seeds = [seed + i for i in range(trials)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda s: _one_trial(T, s, rel_tol), seeds))
    else:
        results = [_one_trial(T, s, rel_tol) for s in seeds]

    reports = []
    for claim in ('horizontal_eq2', 'horizontal_level', 'vertical_eq3', 'jensen_eq4', 'combined_bound'):
        per_trial = [r[claim] for r in results if claim in r]
        if per_trial:
            reports.append(worst_of(per_trial, claim, T.h, T.k, seed))
    combined = next(r for r in reports if r.claim == 'combined_bound')
    quotients = [r['combined_bound'].details.get('rayleigh', np.inf) for r in results]
    rayleigh_min = float(min(quotients))
    combined.details['rayleigh_min'] = rayleigh_min
    reports.append(certify('rayleigh_bound', rayleigh_min, 1.0 / (7.0 * T.k ** 2), h=T.h, k=T.k,
                           seed=seed, trials=trials, rel_tol=rel_tol))
    logger.info(f"Randomized suite h={T.h} k={T.k}: {trials} trials, "
                f"{sum(not r.passed for r in reports)} failing claim(s)")
    return reports
