"""
Smallest non-zero eigenvalue of the weighted Laplacian

Two paths solve the symmetrized problem Pi^-1/2 (D - W) Pi^-1/2:
- dense: full symmetric eigendecomposition (n <= dense_cutoff)
- iterative: Jacobi-preconditioned LOBPCG from a seeded starting block, with
  the pi-weighted constants lifted out of the way, residual certified at exit
"""
import logging
import warnings
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import LinearOperator, lobpcg

from ..errors import ConvergenceError, InvalidInputError, InvalidParameterError
from ..graphs.weighted_graph import GraphLike, as_weighted_graph
from .laplacian import laplacian_apply, symmetric_laplacian

logger = logging.getLogger('planar_gap.spectral')

DEFAULT_TOLERANCE = 1e-8
DEFAULT_MAX_ITER = 5000
DENSE_CUTOFF = 2000
BLOCK_SIZE = 4
SOLVERS = ('auto', 'dense', 'iterative')


@dataclass
class SpectralReport:
    """Result of a lambda_1 computation"""
    lambda1: float
    eigenvector: np.ndarray = field(repr=False)
    residual: float
    solver: str
    iterations: int
    tolerance: float
    converged: bool = True
    # component label per vertex when the graph is disconnected (lambda1 = 0)
    components: Optional[List[int]] = field(default=None, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'lambda1': float(self.lambda1),
            'residual': float(self.residual),
            'solver': self.solver,
            'iterations': int(self.iterations),
            'tolerance': float(self.tolerance),
        }


def residual_scale(G: GraphLike) -> float:
    """Tolerances are relative to max(1, 2 d_max), an upper bound on the spectrum"""
    graph = as_weighted_graph(G)
    return max(1.0, 2.0 * float(np.max(graph.weighted_degree / graph.vertex_weight)))


def _finish(graph, f: np.ndarray, value: float):
    """pi-center, pi-normalize, fix the sign; returns (f, residual)"""
    pi = graph.vertex_weight
    f = f - np.dot(pi, f) / pi.sum()
    f = f / np.sqrt(np.dot(pi, f * f))
    pivot = int(np.argmax(np.abs(f) > 1e-8 * np.abs(f).max()))
    if f[pivot] < 0:
        f = -f
    r = laplacian_apply(graph, f) - value * f
    return f, float(np.sqrt(np.dot(pi, r * r)))


def _disconnected_report(graph, labels: np.ndarray, solver: str, tolerance: float) -> SpectralReport:
    first = labels == labels[0]
    pi = graph.vertex_weight
    f = np.where(first, 1.0 / pi[first].sum(), -1.0 / pi[~first].sum())
    f, residual = _finish(graph, f, 0.0)
    logger.warning(f"Graph is disconnected ({labels.max() + 1} components); lambda1 = 0")
    return SpectralReport(lambda1=0.0, eigenvector=f, residual=residual, solver=solver,
                          iterations=0, tolerance=tolerance, components=labels.tolist())


def _dense(graph, tolerance: float) -> SpectralReport:
    S = symmetric_laplacian(graph).toarray()
    values, vectors = scipy.linalg.eigh(S, subset_by_index=[0, 1])
    value = max(float(values[1]), 0.0)
    f, residual = _finish(graph, vectors[:, 1] / np.sqrt(graph.vertex_weight), value)
    return SpectralReport(lambda1=value, eigenvector=f, residual=residual, solver='dense',
                          iterations=1, tolerance=tolerance)


def _iterative(graph, tolerance: float, max_iter: int, seed: int) -> SpectralReport:
    n = graph.n
    S = symmetric_laplacian(graph).tocsr()
    q = np.sqrt(graph.vertex_weight)
    q /= np.linalg.norm(q)
    # push the constant direction above the spectrum so the smallest eigenpair is lambda_1
    lift = 2.0 * residual_scale(graph)
    calls = [0]

    def matmat(X):
        X = np.asarray(X).reshape(n, -1)
        calls[0] += X.shape[1]
        coef = q @ X
        Y = S @ (X - np.outer(q, coef))
        return Y - np.outer(q, q @ Y) + lift * np.outer(q, coef)

    operator = LinearOperator((n, n), matvec=matmat, matmat=matmat, dtype=np.float64)
    inv_diag = 1.0 / S.diagonal()
    jacobi = LinearOperator((n, n), matvec=lambda x: inv_diag * np.asarray(x).ravel(),
                            matmat=lambda X: inv_diag[:, None] * np.asarray(X).reshape(n, -1),
                            dtype=np.float64)

    # all randomness lives in the starting block, so a seed fixes the run
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, min(BLOCK_SIZE, n)))
    X -= np.outer(q, q @ X)
    bound = tolerance * residual_scale(graph)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always')
        values, vectors = lobpcg(operator, X, M=jacobi, tol=0.5 * bound, maxiter=max_iter,
                                 largest=False)
    for w in caught:
        logger.debug(f"LOBPCG: {w.message}")

    values = np.atleast_1d(values)
    if values.size == 0 or not np.all(np.isfinite(values)):
        best = SpectralReport(lambda1=float('nan'), eigenvector=X[:, 0] / np.sqrt(graph.vertex_weight),
                              residual=float('inf'), solver='iterative', iterations=calls[0],
                              tolerance=tolerance, converged=False)
        raise ConvergenceError(f"LOBPCG returned no Ritz pair after {calls[0]} operator applications",
                               best=best)

    i = int(np.argmin(values))
    value = max(float(values[i]), 0.0)
    f, residual = _finish(graph, vectors[:, i] / np.sqrt(graph.vertex_weight), value)
    report = SpectralReport(lambda1=value, eigenvector=f, residual=residual, solver='iterative',
                            iterations=calls[0], tolerance=tolerance)
    if not residual <= bound:
        report.converged = False
        raise ConvergenceError(
            f"residual {residual:.3e} above certified bound {bound:.3e} "
            f"after {calls[0]} operator applications", best=report
        )
    logger.debug(f"LOBPCG converged: lambda1={value:.12g} residual={residual:.2e} "
                 f"applications={calls[0]}")
    return report


def lambda1(G: GraphLike, solver: str = 'auto', tolerance: float = DEFAULT_TOLERANCE,
            max_iter: int = DEFAULT_MAX_ITER, seed: int = 0,
            dense_cutoff: int = DENSE_CUTOFF) -> SpectralReport:
    """
    Smallest non-zero eigenvalue of L on l^2(V, pi).

    Disconnected graphs return lambda1 = 0 with a component witness. The
    iterative path raises ConvergenceError (carrying the best iterate) when
    the residual cannot be certified.
    """
    graph = as_weighted_graph(G)
    if solver not in SOLVERS:
        raise InvalidParameterError(f"unknown solver {solver!r}; expected one of {SOLVERS}")
    if tolerance <= 0:
        raise InvalidParameterError(f"tolerance must be positive, got {tolerance}")
    if graph.n < 2:
        raise InvalidInputError("lambda1 needs at least two vertices")
    if solver == 'auto':
        solver = 'dense' if graph.n <= dense_cutoff else 'iterative'
    if solver == 'dense' and graph.n > dense_cutoff:
        logger.warning(f"Dense solve requested for n={graph.n} > dense_cutoff={dense_cutoff}")

    count, labels = graph.components()
    if count > 1:
        return _disconnected_report(graph, labels, solver, tolerance)

    if solver == 'dense':
        return _dense(graph, tolerance)
    return _iterative(graph, tolerance, max_iter, seed)


def normalized_lambda1(G: GraphLike, **options) -> SpectralReport:
    """
    Spectral gap of the normalized Laplacian D^-1/2 (D - W) D^-1/2.

    This is lambda_1 of L with pi replaced by the weighted degree, i.e. the
    gap of the simple (non-lazy) random walk.
    """
    graph = as_weighted_graph(G)
    if np.any(graph.weighted_degree <= 0):
        raise InvalidInputError("normalized Laplacian needs every vertex to have an edge")
    return lambda1(graph.with_vertex_weights(graph.weighted_degree), **options)
