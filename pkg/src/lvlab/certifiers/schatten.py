"""Schatten tensor method.

For A = M M* the r-linear form

    S_r(v_1, ..., v_r) = sum A[i1,i2] A[i2,i3] ... A[ir,i1] v_1[i1] ... v_r[ir]
                       = Trace(diag(v_1) A diag(v_2) A ... diag(v_r) A)

satisfies S_r(1_W, ..., 1_W) = Trace[(M_W* M_W)^r] = sum_i s_i(M_W)^{2r}.
Splitting off the diagonal tensor with entries A[i,i]^r leaves a remainder
whose norm is bounded by the operator norm of a flattening:

    r = 2: the T x T matrix |A[i,j]|^2 with zero diagonal
    r = 3: T x T^2, row i1, column (i2, i3)
    r = 4: T^2 x T^2, row (i1, i2), column (i3, i4)

The matrix-free flattenings act on T x T arrays X and cost a few dense
T x T products per application.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any, ClassVar

import numpy as np
from scipy.optimize import brentq
from scipy.sparse.linalg import LinearOperator

from ..errors import CapExceeded, InvalidParameter
from ..linalg import DEFAULT_TOL, gram, operator_norm
from ..models import ComplexArray, ComplexMatrix
from .base import Certificate

logger = logging.getLogger(__name__)

SUPPORTED_ORDERS = (2, 3, 4)
MATRIX_FREE_CAP = 512
DENSE_FLAT_CAP = 4_000_000
# Below this many tensor entries "auto" takes the exact dense SVD.
AUTO_DENSE_ENTRIES = 262_144
FLAT_METHODS = ("auto", "power", "dense")


@dataclass(frozen=True)
class SchattenCertificate(Certificate):
    method: ClassVar[str] = "schatten"

    r: int
    diag_const: float
    flat_norm: float

    def minor_norm_sq_bound(self, size: int) -> float:
        r = self.r
        return float((self.diag_const**r * size + self.flat_norm * size ** (r / 2)) ** (1.0 / r))

    def closed_form(self, lam: float, b_budget_sq: float) -> tuple[float, str]:
        r, D, F = self.r, self.diag_const, self.flat_norm
        if F <= 0:
            return (b_budget_sq * D / lam**2) ** (r / (r - 1)), "Schatten diagonal term"

        def excess(w: float) -> float:
            # Increasing in w; its root solves w^r lam^{2r} = B^{2r} (D^r w + F w^{r/2}).
            return lam ** (2 * r) * w ** (r / 2) - b_budget_sq**r * (
                D**r * w ** (1 - r / 2) + F
            )

        hi = 1.0
        while excess(hi) <= 0:
            hi *= 2.0
            if hi > 1e300:
                return math.inf, "Schatten flattened remainder"
        lo = 1.0
        while excess(lo) >= 0 and lo > 1e-300:
            lo /= 2.0
        root = float(brentq(excess, lo, hi, xtol=1e-300, rtol=1e-14)) if excess(lo) < 0 else lo
        diagonal_term = D**r * root
        remainder_term = F * root ** (r / 2)
        label = (
            "Schatten diagonal term" if diagonal_term >= remainder_term
            else "Schatten flattened remainder"
        )
        return root, label

    def constants(self) -> dict[str, Any]:
        return {"r": self.r, "diag_const": self.diag_const, "flat_norm": self.flat_norm}


def _check_order(r: int) -> None:
    if r not in SUPPORTED_ORDERS:
        raise InvalidParameter(f"Schatten order r must be one of {SUPPORTED_ORDERS}, got {r}")


def schatten_form(
    M: ComplexMatrix, vectors: Sequence[np.ndarray], remainder: bool = False
) -> complex:
    """Evaluate S_r(v_1, ..., v_r) with r = len(vectors).

    Args:
        M: The T x N matrix.
        vectors: r vectors of length T.
        remainder: Subtract the diagonal tensor sum_i A[i,i]^r v_1[i] ... v_r[i].

    Returns:
        The complex value of the form.
    """
    if not vectors:
        raise InvalidParameter("schatten_form needs at least one vector")
    A = gram(M).data
    product = np.eye(M.T, dtype=np.complex128)
    for v in vectors:
        vec = np.asarray(v, dtype=np.complex128)
        if vec.shape != (M.T,):
            raise InvalidParameter(f"Vectors must have length T={M.T}, got {vec.shape}")
        product = product @ (vec[:, None] * A)
    value = complex(np.trace(product))
    if remainder:
        diag = A.diagonal().real ** len(vectors)
        value -= complex(np.sum(diag * np.prod(np.asarray(vectors, dtype=np.complex128), axis=0)))
    return value


def schatten_flattening(M: ComplexMatrix, r: int) -> ComplexArray:
    """Explicit flattening of the remainder tensor (dense; T^r <= DENSE_FLAT_CAP)."""
    _check_order(r)
    T = M.T
    if T**r > DENSE_FLAT_CAP:
        raise CapExceeded("dense flattening entries T^r", T**r, DENSE_FLAT_CAP)
    A = gram(M).data
    idx = np.arange(T)
    if r == 2:
        flat = A * A.T
        flat[idx, idx] = 0.0
        return flat
    if r == 3:
        tensor = np.einsum("ab,bc,ca->abc", A, A, A)
        tensor[idx, idx, idx] -= A.diagonal() ** 3
        return tensor.reshape(T, T * T)
    tensor = np.einsum("ab,bc,cd,da->abcd", A, A, A, A)
    tensor[idx, idx, idx, idx] -= A.diagonal() ** 4
    return tensor.reshape(T * T, T * T)


def flattening_operator(A: ComplexArray, r: int) -> LinearOperator:
    """Matrix-free flattening of the remainder tensor for the Gram matrix A."""
    _check_order(r)
    T = A.shape[0]
    diag = A.diagonal().real
    conjA = A.conj()

    if r == 2:
        K = np.abs(A) ** 2
        np.fill_diagonal(K, 0.0)
        return LinearOperator(
            shape=(T, T), matvec=lambda x: K @ x, rmatvec=lambda y: K.T @ y, dtype=np.complex128
        )

    if r == 3:

        def matvec3(x: np.ndarray) -> np.ndarray:
            X = np.asarray(x).reshape(T, T)
            P = A @ (A * X)
            return np.sum(P * A.T, axis=1) - diag**3 * X.diagonal()

        def rmatvec3(y: np.ndarray) -> np.ndarray:
            vec = np.asarray(y).reshape(T)
            X = conjA * ((A * vec[None, :]) @ A)
            X[np.arange(T), np.arange(T)] -= diag**3 * vec
            return X.reshape(-1)

        return LinearOperator(
            shape=(T, T * T), matvec=matvec3, rmatvec=rmatvec3, dtype=np.complex128
        )

    def matvec4(x: np.ndarray) -> np.ndarray:
        X = np.asarray(x).reshape(T, T)
        Y = A * (A @ (A * X) @ A).T
        Y[np.arange(T), np.arange(T)] -= diag**4 * X.diagonal()
        return Y.reshape(-1)

    def rmatvec4(y: np.ndarray) -> np.ndarray:
        Y = np.asarray(y).reshape(T, T)
        X = conjA * (A @ (conjA * Y).T @ A)
        X[np.arange(T), np.arange(T)] -= diag**4 * Y.diagonal()
        return X.reshape(-1)

    return LinearOperator(
        shape=(T * T, T * T), matvec=matvec4, rmatvec=rmatvec4, dtype=np.complex128
    )


def flat_norm(M: ComplexMatrix, r: int, method: str = "auto", tol: float = DEFAULT_TOL) -> float:
    """Operator norm of the remainder flattening.

    ``"dense"`` takes the exact spectral norm of the explicit flattening,
    ``"power"`` applies the matrix-free flattening and returns the upper bound
    of ``operator_norm``, ``"auto"`` picks dense for small tensors.
    """
    _check_order(r)
    if method not in FLAT_METHODS:
        raise InvalidParameter(f"Unknown flattening method '{method}', expected {FLAT_METHODS}")
    if method == "auto":
        method = "dense" if M.T**r <= AUTO_DENSE_ENTRIES else "power"
    if method == "dense":
        return float(np.linalg.norm(schatten_flattening(M, r), 2))
    if M.T > MATRIX_FREE_CAP:
        raise CapExceeded("matrix-free Schatten rows T", M.T, MATRIX_FREE_CAP)
    logger.debug("matrix-free flattening r=%d on T=%d", r, M.T)
    return operator_norm(flattening_operator(gram(M).data, r), tol)


def cert_schatten(
    M: ComplexMatrix, r: int = 3, tol: float = DEFAULT_TOL, method: str = "auto"
) -> SchattenCertificate:
    """Store D_0 = max_i A_ii and F >= the remainder tensor norm."""
    _check_order(r)
    A = gram(M)
    return SchattenCertificate(
        T=M.T,
        N=M.N,
        r=r,
        diag_const=A.diag_max(),
        flat_norm=flat_norm(M, r, method=method, tol=tol),
    )
