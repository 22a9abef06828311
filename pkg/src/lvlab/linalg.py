"""Dense and matrix-free linear algebra kernels.

Dense spectra go through LAPACK (numpy/scipy). Everything that only needs the
top of the spectrum can also run matrix-free on a
``scipy.sparse.linalg.LinearOperator``: small operators are materialized and
solved exactly, larger ones go through ARPACK Lanczos with a residual
correction so the returned value is an upper bound.
"""

import logging

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, aslinearoperator, eigsh

from .errors import CapExceeded, InvalidParameter
from .models import ComplexArray, ComplexMatrix, GramMatrix, SingularSpectrum

logger = logging.getLogger(__name__)

DENSE_CAP = 512
MAX_ITERATIONS = 10_000
DEFAULT_TOL = 1e-10
START_SEED = 0

MatrixLike = ComplexMatrix | np.ndarray | LinearOperator


def _array(M: ComplexMatrix | np.ndarray) -> ComplexArray:
    if isinstance(M, ComplexMatrix):
        return M.data
    return np.asarray(M, dtype=np.complex128)


def _check_tol(tol: float) -> None:
    if not 0 < tol < 1:
        raise InvalidParameter(f"tol must be in (0, 1), got {tol}")


def _op_dtype(op: LinearOperator) -> type:
    return np.float64 if np.dtype(op.dtype).kind == "f" else np.complex128


def _start_vector(n: int, attempt: int, dtype: type = np.complex128) -> np.ndarray:
    rng = np.random.default_rng(START_SEED + attempt)
    vec = np.ones(n) + 0.1 * rng.standard_normal(n)
    return np.asarray(vec / np.linalg.norm(vec), dtype=dtype)


def _residual(op: LinearOperator, vec: np.ndarray, theta: float) -> float:
    vec = vec / np.linalg.norm(vec)
    return float(np.linalg.norm(np.asarray(op.matvec(vec)).reshape(-1) - theta * vec))


def _power_iterate(op: LinearOperator, tol: float) -> tuple[float, np.ndarray]:
    n = op.shape[0]
    dtype = _op_dtype(op)
    attempt = 0
    x = _start_vector(n, attempt, dtype)
    rho = 0.0
    for iteration in range(1, MAX_ITERATIONS + 1):
        y = np.asarray(op.matvec(x)).reshape(-1)
        rho_new = float(np.real(np.vdot(x, y)))
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            # Start vector fell into the null space; re-seed.
            attempt += 1
            if attempt > 3:
                return 0.0, x
            x = _start_vector(n, attempt, dtype)
            continue
        if iteration > 1 and abs(rho_new - rho) <= 1e-2 * tol * max(rho_new, 0.0):
            logger.debug("power iteration converged after %d iterations", iteration)
            return max(rho_new, 0.0), x
        x = y / norm
        rho = rho_new
    logger.warning("power iteration hit the %d iteration cap", MAX_ITERATIONS)
    return max(rho, 0.0), x


def power_iteration(op: LinearOperator, tol: float = DEFAULT_TOL) -> float:
    """Estimate of the largest eigenvalue of a Hermitian positive semi-definite operator.

    The start vector is all-ones plus a small fixed-seed perturbation, so the
    result is deterministic. Iteration stops once successive Rayleigh quotients
    agree to ``tol / 100`` relative, or after MAX_ITERATIONS. The value is a
    Rayleigh quotient and therefore never above the true eigenvalue; use
    ``top_eigenvalue_bound`` where an upper bound is needed.
    """
    _check_tol(tol)
    return _power_iterate(op, tol)[0]


def top_eigenvalue_bound(op: LinearOperator, tol: float = DEFAULT_TOL) -> float:
    """Upper bound on the largest eigenvalue of a Hermitian operator.

    Operators up to DENSE_CAP are materialized and solved by LAPACK. Above it,
    ARPACK Lanczos (``eigsh``, largest algebraic) returns a Ritz pair
    (theta, v) and the result is theta + ||Hv - theta v|| + tol * |theta|.
    """
    _check_tol(tol)
    n = op.shape[0]
    if n <= DENSE_CAP:
        dense = np.asarray(op.matmat(np.eye(n, dtype=_op_dtype(op))))
        return _dense_top((dense + dense.conj().T) / 2)

    v0 = _start_vector(n, 0, _op_dtype(op))
    try:
        values, vectors = eigsh(op, k=1, which="LA", tol=tol, v0=v0, maxiter=MAX_ITERATIONS)
        theta, vec = float(np.real(values[0])), vectors[:, 0]
    except ArpackNoConvergence as exc:
        if exc.eigenvalues.size:
            theta, vec = float(np.real(exc.eigenvalues[0])), exc.eigenvectors[:, 0]
        else:
            logger.warning("Lanczos did not converge on n=%d, falling back to power iteration", n)
            theta, vec = _power_iterate(op, tol)
    residual = _residual(op, vec, theta)
    logger.debug("Lanczos top eigenvalue %.12g with residual %.3g", theta, residual)
    return theta + residual + tol * abs(theta)


def _dense_top(A: np.ndarray) -> float:
    n = A.shape[0]
    top = scipy.linalg.eigvalsh(A, subset_by_index=[n - 1, n - 1])
    return float(top[0])


def normal_operator(M: MatrixLike) -> LinearOperator:
    """M*M as a LinearOperator on the column side."""
    if isinstance(M, LinearOperator):
        op = M
    else:
        op = aslinearoperator(_array(M))
    return LinearOperator(
        shape=(op.shape[1], op.shape[1]),
        matvec=lambda x: op.rmatvec(op.matvec(x)),
        dtype=np.complex128,
    )


def operator_norm(M: MatrixLike, tol: float = DEFAULT_TOL) -> float:
    """s_1(M), never below the true value and within tol of it.

    Dense input under DENSE_CAP is solved exactly on the smaller Gram side.
    A LinearOperator, or a larger dense matrix, goes through
    ``top_eigenvalue_bound`` on the smaller of M*M and MM*.
    """
    _check_tol(tol)
    if not isinstance(M, LinearOperator):
        data = _array(M)
        if min(data.shape) <= DENSE_CAP:
            return top_singular_value(data)
        op = aslinearoperator(data)
    else:
        op = M
    if op.shape[0] < op.shape[1]:
        op = op.H
    return float(np.sqrt(max(top_eigenvalue_bound(normal_operator(op), tol), 0.0)))


def hermitian_top_eigenvalue(A: np.ndarray, tol: float = DEFAULT_TOL) -> float:
    """Largest eigenvalue of a dense Hermitian matrix.

    Exact LAPACK solve under DENSE_CAP; above it, the Lanczos upper bound of
    ``top_eigenvalue_bound``.
    """
    n = A.shape[0]
    if n <= DENSE_CAP:
        return _dense_top(A)
    logger.debug("dimension %d above dense cap, using Lanczos", n)
    return top_eigenvalue_bound(aslinearoperator(A), tol)


def spectral_norm_sq(M: ComplexMatrix | np.ndarray, tol: float = DEFAULT_TOL) -> float:
    """s_1(M)^2 from the smaller Gram side: exact under the cap, else the Lanczos bound."""
    data = _array(M)
    small = data.conj().T @ data if data.shape[1] <= data.shape[0] else data @ data.conj().T
    small = (small + small.conj().T) / 2
    return max(hermitian_top_eigenvalue(small, tol), 0.0)


def top_singular_value(M: ComplexMatrix | np.ndarray, tol: float = DEFAULT_TOL) -> float:
    """s_1(M) through ``spectral_norm_sq``."""
    return float(np.sqrt(spectral_norm_sq(M, tol)))


def singular_values(M: ComplexMatrix | np.ndarray) -> SingularSpectrum:
    """Full singular spectrum (dense SVD, min(T, N) <= DENSE_CAP)."""
    data = _array(M)
    size = min(data.shape)
    if size > DENSE_CAP:
        raise CapExceeded("dense spectrum min(T, N)", size, DENSE_CAP)
    values = np.linalg.svd(data, compute_uv=False)
    return SingularSpectrum(np.sort(values)[::-1])


def schatten_norm(M: ComplexMatrix | np.ndarray, p: float) -> float:
    """(sum_i s_i^p)^(1/p); p = inf gives s_1."""
    if p < 1:
        raise InvalidParameter(f"Schatten exponent must be >= 1, got {p}")
    spectrum = singular_values(M)
    if np.isinf(p):
        return spectrum.top
    return float(np.sum(spectrum.values**p) ** (1.0 / p))


def schatten_trace(M: ComplexMatrix | np.ndarray, r: int) -> float:
    """Trace[(M*M)^r] = sum_i s_i^{2r}, by direct matrix powers."""
    if r < 1:
        raise InvalidParameter(f"r must be >= 1, got {r}")
    data = _array(M)
    small = data.conj().T @ data if data.shape[1] <= data.shape[0] else data @ data.conj().T
    return float(np.trace(np.linalg.matrix_power(small, r)).real)


def gram(M: ComplexMatrix | np.ndarray) -> GramMatrix:
    """A = M M*, symmetrized so it is exactly Hermitian."""
    data = _array(M)
    A = data @ data.conj().T
    return GramMatrix((A + A.conj().T) / 2)
