"""Operator norm method: |W| lambda^2 <= ||M||^2 B^2."""

from dataclasses import dataclass
from typing import Any, ClassVar

from ..linalg import DEFAULT_TOL, spectral_norm_sq
from ..models import ComplexMatrix
from .base import Certificate


@dataclass(frozen=True)
class OperatorNormCertificate(Certificate):
    method: ClassVar[str] = "operator"

    opnorm_sq: float

    def minor_norm_sq_bound(self, size: int) -> float:
        return self.opnorm_sq

    def closed_form(self, lam: float, b_budget_sq: float) -> tuple[float, str]:
        return self.opnorm_sq * b_budget_sq / (lam * lam), "operator norm"

    def constants(self) -> dict[str, Any]:
        return {"opnorm_sq": self.opnorm_sq}


def cert_operator(M: ComplexMatrix, tol: float = DEFAULT_TOL) -> OperatorNormCertificate:
    """Store ||M||^2."""
    return OperatorNormCertificate(T=M.T, N=M.N, opnorm_sq=spectral_norm_sq(M, tol))
