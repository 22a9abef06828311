"""Base certificate class and the uniform evaluation rule."""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, ClassVar

from .. import __version__
from ..errors import InvalidParameter

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
# Relative slack on the admissibility test; rounds toward the larger (sound) side.
SOUND_SLACK = 1e-12


@dataclass(frozen=True)
class LVBound:
    """Upper bound on the number of rows with |(Mb)_t| > lambda."""

    max_w: int
    unbounded: bool
    binding_constraint: str
    raw: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "max_w": self.max_w,
            "unbounded": self.unbounded,
            "binding_constraint": self.binding_constraint,
            "raw": self.raw if math.isfinite(self.raw) else None,
        }


@dataclass(frozen=True)
class Certificate(ABC):
    """A method-tagged record of constants implying a bound on |W|.

    Subclasses state their bound on ||M_W||^2 as a function of |W| (with
    ||b|| = 1). ``minor_norm_sq_bound(s) / s`` must be non-increasing, which
    makes the admissible cardinalities an initial segment of 1..T.
    """

    method: ClassVar[str]

    T: int
    N: int

    @abstractmethod
    def minor_norm_sq_bound(self, size: int) -> float:
        """Upper bound on ||M_W||^2 over all W with |W| = size."""

    @abstractmethod
    def closed_form(self, lam: float, b_budget_sq: float) -> tuple[float, str]:
        """Real-valued bound on |W| before clamping, and the dominating term."""

    @abstractmethod
    def constants(self) -> dict[str, Any]:
        """Method-specific constants for serialization."""

    def admits(self, size: int, lam: float, b_budget_sq: float) -> bool:
        """True if the certificate allows ``size`` rows above ``lam``."""
        return size * lam * lam <= b_budget_sq * self.minor_norm_sq_bound(size) * (
            1.0 + SOUND_SLACK
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool_version": __version__,
            "method": self.method,
            "dims": [self.T, self.N],
            "constants": self.constants(),
        }


def evaluate(cert: Certificate, lam: float, b_budget_sq: float) -> LVBound:
    """Largest |W| <= T the certificate cannot rule out, by bisection on 1..T."""
    if lam <= 0 or b_budget_sq <= 0:
        raise InvalidParameter(f"lambda and B^2 must be > 0, got {lam}, {b_budget_sq}")
    raw, binding = cert.closed_form(lam, b_budget_sq)
    if not cert.admits(1, lam, b_budget_sq):
        return LVBound(max_w=0, unbounded=False, binding_constraint=binding, raw=raw)
    lo, hi = 1, cert.T
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if cert.admits(mid, lam, b_budget_sq):
            lo = mid
        else:
            hi = mid - 1
    logger.debug("%s bound at lambda=%g: max_w=%d raw=%g", cert.method, lam, lo, raw)
    return LVBound(max_w=lo, unbounded=math.isinf(raw), binding_constraint=binding, raw=raw)
