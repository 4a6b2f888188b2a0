"""
Certificate records for numerically checked inequalities
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional

logger = logging.getLogger('planar_gap.verify')

DEFAULT_REL_TOL = 1e-9

CLAIMS = (
    'diam_bound', 'horizontal_eq2', 'vertical_eq3', 'jensen_eq4', 'qh_gap', 'qh_cheeger',
    'subdivision_scaling', 'theorem1_gap', 'theorem1_logdiam', 'theorem2_product',
    # finer-grained and auxiliary checks
    'horizontal_level', 'combined_bound', 'rayleigh_bound', 'lipschitz_bound', 'cheeger_eq1',
)


@dataclass
class CertificateReport:
    """lhs >= rhs, accepted when lhs - rhs >= -rel_tol * max(|lhs|, |rhs|, 1)"""
    claim: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    h: Optional[int] = None
    k: Optional[int] = None
    seed: Optional[int] = None
    trials: int = 1
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def relative_margin(self) -> float:
        return self.margin / max(abs(self.lhs), abs(self.rhs), 1.0)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'claim': self.claim,
            'lhs': float(self.lhs),
            'rhs': float(self.rhs),
            'margin': float(self.margin),
            'pass': bool(self.passed),
            'h': self.h,
            'k': self.k,
            'seed': self.seed,
            'trials': self.trials,
        }
        if self.details:
            data['details'] = self.details
        return data


def certify(claim: str, lhs: float, rhs: float, h: Optional[int] = None, k: Optional[int] = None,
            seed: Optional[int] = None, trials: int = 1, rel_tol: float = DEFAULT_REL_TOL,
            details: Optional[Dict[str, Any]] = None, require: bool = True) -> CertificateReport:
    """
    Build a report for lhs >= rhs.

    `require=False` forces a failure regardless of the margin, for checks whose
    side conditions did not hold.
    """
    if claim not in CLAIMS:
        raise ValueError(f"unknown claim id {claim!r}")
    lhs, rhs = float(lhs), float(rhs)
    margin = lhs - rhs
    passed = require and margin >= -rel_tol * max(abs(lhs), abs(rhs), 1.0)
    report = CertificateReport(claim=claim, lhs=lhs, rhs=rhs, margin=margin, passed=bool(passed),
                               h=h, k=k, seed=seed, trials=trials, details=dict(details or {}))
    if not passed:
        logger.warning(f"{claim} failed: lhs={lhs:.12g} rhs={rhs:.12g} (h={h}, k={k}, seed={seed})")
    return report


def worst_of(reports: Iterable[CertificateReport], claim: str, h: Optional[int], k: Optional[int],
             seed: Optional[int]) -> CertificateReport:
    """Collapse per-trial reports into one: the smallest relative margin, pass iff all pass"""
    reports: List[CertificateReport] = list(reports)
    if not reports:
        raise ValueError(f"no reports to aggregate for {claim}")
    index = min(range(len(reports)), key=lambda i: reports[i].relative_margin)
    worst = reports[index]
    failures = sum(not r.passed for r in reports)
    details = dict(worst.details)
    details.update({'worst_trial': index, 'failures': failures})
    return CertificateReport(claim=claim, lhs=worst.lhs, rhs=worst.rhs, margin=worst.margin,
                             passed=failures == 0, h=h, k=k, seed=seed, trials=len(reports),
                             details=details)


def all_passed(reports: Iterable[CertificateReport]) -> bool:
    return all(r.passed for r in reports)
