"""
Numerical certificates for the hat-tree gap bounds
"""
from .certificate import CLAIMS, CertificateReport, all_passed, certify, worst_of
from .chain_checks import chain_cheeger, check_qh_gap, check_subdivision_scaling, subdivision_ratio
from .level_checks import (
    check_combined, check_horizontal, check_horizontal_levels, check_jensen, check_vertical,
    hat_tree_levels, level_average, random_centered_function, run_randomized_suite,
    uniform_child_counts,
)
from .theorem_checks import (
    Theorem2Products, canonical_lipschitz_maps, check_lipschitz, check_product_trend,
    lipschitz_upper_bound, require_agreement, theorem1_certificate, theorem2_product,
    verify_all,
)

__all__ = [
    'CLAIMS', 'CertificateReport', 'all_passed', 'certify', 'worst_of',
    'chain_cheeger', 'check_qh_gap', 'check_subdivision_scaling', 'subdivision_ratio',
    'check_combined', 'check_horizontal', 'check_horizontal_levels', 'check_jensen', 'check_vertical',
    'hat_tree_levels', 'level_average', 'random_centered_function', 'run_randomized_suite',
    'uniform_child_counts',
    'Theorem2Products', 'canonical_lipschitz_maps', 'check_lipschitz', 'check_product_trend',
    'lipschitz_upper_bound', 'require_agreement', 'theorem1_certificate', 'theorem2_product', 'verify_all',
]
