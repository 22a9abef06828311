"""MM* method: Gershgorin row sums on the Gram minor A_W = M_W M_W*."""

import math
from dataclasses import dataclass
from typing import Any, ClassVar

from ..linalg import gram
from ..models import ComplexMatrix
from .base import Certificate


@dataclass(frozen=True)
class MMStarCertificate(Certificate):
    method: ClassVar[str] = "mmstar"

    diag_max: float
    offdiag_max: float

    def minor_norm_sq_bound(self, size: int) -> float:
        return self.diag_max + (size - 1) * self.offdiag_max

    def closed_form(self, lam: float, b_budget_sq: float) -> tuple[float, str]:
        d, c = self.diag_max, self.offdiag_max
        margin = lam * lam - c * b_budget_sq
        if margin <= 0:
            return math.inf, "off-diagonal Gram entries"
        return (d - c) * b_budget_sq / margin, "Gram row sum"

    def constants(self) -> dict[str, Any]:
        return {"diag_max": self.diag_max, "offdiag_max": self.offdiag_max}


def cert_mmstar(M: ComplexMatrix) -> MMStarCertificate:
    """Store d = max_i A_ii and c = max_{i != i'} |A_ii'|."""
    A = gram(M)
    return MMStarCertificate(T=M.T, N=M.N, diag_max=A.diag_max(), offdiag_max=A.offdiag_max())
