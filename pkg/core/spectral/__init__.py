"""
Laplacian operators, lambda_1 solvers and Cheeger constants
"""
from .cheeger import (
    CheegerInequalityReport, CheegerReport, cheeger_bounds, cheeger_exact, cheeger_sweep,
    cut_weight, verify_cheeger_inequality,
)
from .eigensolver import SpectralReport, lambda1, normalized_lambda1, residual_scale
from .laplacian import (
    inner_product, laplacian_apply, normalized_laplacian_apply, pi_center, pi_norm,
    rayleigh_quotient, symmetric_laplacian,
)

__all__ = [
    'CheegerInequalityReport', 'CheegerReport', 'SpectralReport',
    'cheeger_bounds', 'cheeger_exact', 'cheeger_sweep', 'cut_weight', 'verify_cheeger_inequality',
    'lambda1', 'normalized_lambda1', 'residual_scale',
    'inner_product', 'laplacian_apply', 'normalized_laplacian_apply', 'pi_center', 'pi_norm',
    'rayleigh_quotient', 'symmetric_laplacian',
]
