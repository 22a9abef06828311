"""Power method: bound sum_i |(Mv)_i|^{2k} through the tensor power M^{(x)k}.

Row i of M^{(x)k} is the k-fold Kronecker power of row i, so
M^{(x)k} (M^{(x)k})* equals the entrywise k-th power of the T x T Gram matrix.
For k = 2 and real M the columns split into the duplicated indices (j, j)
(the simple part D) and the rest (the residual Q), and
Q Q* = (M M*)^{o2} - (M o M)(M o M)^T.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, ClassVar

import numpy as np

from ..errors import CapExceeded, InvalidParameter, Unsupported
from ..linalg import DEFAULT_TOL, gram, hermitian_top_eigenvalue, spectral_norm_sq
from ..models import ComplexMatrix, FloatArray
from .base import Certificate

logger = logging.getLogger(__name__)

EXPLICIT_CAP = 1_000_000


@dataclass(frozen=True)
class PowerCertificate(Certificate):
    method: ClassVar[str] = "power"

    k: int
    diag_corrected: bool
    tensor_opnorm_sq: float
    simple_bound: float = 0.0
    residual_norm: float = 0.0
    entry_sq_max: float = 0.0

    def minor_norm_sq_bound(self, size: int) -> float:
        # Hoelder: sum_W |(Mb)_i|^2 <= |W|^{1-1/k} (sum_W |(Mb)_i|^{2k})^{1/k}
        bound = size ** (1.0 - 1.0 / self.k) * self.tensor_opnorm_sq ** (1.0 / self.k)
        if self.diag_corrected:
            simple = min(self.simple_bound, math.sqrt(size) * self.entry_sq_max)
            bound = min(bound, math.sqrt(size) * (simple + self.residual_norm))
        return bound

    def closed_form(self, lam: float, b_budget_sq: float) -> tuple[float, str]:
        k = self.k
        rules = [(self.tensor_opnorm_sq * (b_budget_sq / lam**2) ** k, "tensor-power norm")]
        if self.diag_corrected:
            ratio = b_budget_sq / lam**2
            split = (self.simple_bound + self.residual_norm) ** 2 * ratio**2
            rules.append((split, "diagonal split over all rows"))
            margin = lam**2 - self.entry_sq_max * b_budget_sq
            restricted = (
                (self.residual_norm * b_budget_sq / margin) ** 2 if margin > 0 else math.inf
            )
            rules.append((restricted, "diagonal split over the large rows"))
        return min(rules, key=lambda rule: rule[0])

    def constants(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "diag_corrected": self.diag_corrected,
            "tensor_opnorm_sq": self.tensor_opnorm_sq,
            "simple_bound": self.simple_bound,
            "residual_norm": self.residual_norm,
            "entry_sq_max": self.entry_sq_max,
        }


def tensor_power(M: ComplexMatrix, k: int) -> ComplexMatrix:
    """Explicit T x N^k matrix with entry (i, (j_1..j_k)) = prod_l M_{i j_l}."""
    if k < 1:
        raise InvalidParameter(f"k must be >= 1, got {k}")
    if M.N**k > EXPLICIT_CAP:
        raise CapExceeded("tensor power columns N^k", M.N**k, EXPLICIT_CAP)
    out = M.data
    for _ in range(k - 1):
        out = (out[:, :, None] * M.data[:, None, :]).reshape(M.T, -1)
    return ComplexMatrix(out, kind=f"{M.kind}^(x){k}")


def duplicated_index_vector(N: int) -> FloatArray:
    """w in R^{N^2} with w_(j,j) = 1 and zero elsewhere."""
    w = np.zeros(N * N, dtype=np.float64)
    w[:: N + 1] = 1.0
    return w


def cert_power(
    M: ComplexMatrix,
    k: int = 2,
    diag_corrected: bool = False,
    explicit: bool = False,
    tol: float = DEFAULT_TOL,
) -> PowerCertificate:
    """Store ||M^{(x)k}||^2 and, for k = 2 on real M, the diagonal split constants."""
    if k < 2:
        raise InvalidParameter(f"k must be >= 2, got {k}")
    if diag_corrected and (k != 2 or not M.is_real()):
        raise Unsupported("diagonal correction requires k = 2 and a real-valued matrix")

    if explicit:
        tensor_sq = spectral_norm_sq(tensor_power(M, k), tol)
    else:
        A = gram(M).data
        tensor_sq = max(hermitian_top_eigenvalue(A**k, tol), 0.0)
    logger.debug("power certificate k=%d: ||M^(x)k||^2 = %g", k, tensor_sq)
    if not diag_corrected:
        return PowerCertificate(T=M.T, N=M.N, k=k, diag_corrected=False,
                                tensor_opnorm_sq=tensor_sq)

    real = M.data.real
    R = real * real
    A2 = gram(real).data.real ** 2
    residual_gram = A2 - R @ R.T
    residual_gram = (residual_gram + residual_gram.T) / 2
    residual_sq = max(hermitian_top_eigenvalue(residual_gram, tol), 0.0)
    # ||R u|| for u >= 0 with ||u||_1 <= 1: both column norms and ||R|| bound it.
    simple = min(float(np.max(np.linalg.norm(R, axis=0))), math.sqrt(spectral_norm_sq(R, tol)))
    return PowerCertificate(
        T=M.T,
        N=M.N,
        k=2,
        diag_corrected=True,
        tensor_opnorm_sq=tensor_sq,
        simple_bound=simple,
        residual_norm=math.sqrt(residual_sq),
        entry_sq_max=float(np.max(R)),
    )
