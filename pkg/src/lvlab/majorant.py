"""Majorant principle checks for trigonometric polynomials.

D_major replaces every coefficient by its modulus. Even moments of D over the
circle, and even-power sums of D over a difference set, are dominated by the
same quantities for D_major.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from .errors import BudgetExceeded, InvalidParameter, NonIntegerFrequencies, NotAnAP
from .models import ComplexArray, FloatArray, FrequencySet, TrigPolynomial

logger = logging.getLogger(__name__)

RELATIVE_SLACK = 1e-9
CONVOLUTION_BUDGET = 10_000_000
DIFFSET_BUDGET = 100_000_000
SCAN_BUDGET = 10_000_000
SCAN_CHUNK = 4096


@dataclass(frozen=True)
class Verdict:
    """Outcome of one inequality check: lhs <= rhs (with relative slack)."""

    check: str
    lhs: float
    rhs: float
    holds: bool
    parameters: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
            "parameters": dict(self.parameters),
        }


def _holds(lhs: float, rhs: float) -> bool:
    return lhs <= rhs + RELATIVE_SLACK * abs(rhs)


def _check_power(s: int) -> None:
    if s < 1:
        raise InvalidParameter(f"s must be a positive integer, got {s}")


def majorize(D: TrigPolynomial) -> TrigPolynomial:
    """The minimal majorant: coefficients replaced by their moduli."""
    return TrigPolynomial(D.freqs, np.abs(D.coeffs).astype(np.complex128))


def _integer_coefficients(D: TrigPolynomial) -> tuple[int, ComplexArray]:
    k = D.freqs.freqs / (2 * math.pi)
    rounded = np.round(k)
    if np.any(np.abs(k - rounded) > 1e-9 * np.maximum(1.0, np.abs(k))):
        raise NonIntegerFrequencies("circle check needs frequencies in 2*pi*Z")
    index = rounded.astype(np.int64)
    low = int(index.min())
    coeffs = np.zeros(int(index.max()) - low + 1, dtype=np.complex128)
    np.add.at(coeffs, index - low, D.coeffs)
    return low, coeffs


def _circle_moment(coeffs: ComplexArray, s: int) -> float:
    power = coeffs
    for _ in range(s - 1):
        power = np.convolve(power, coeffs)
    return float(np.sum(np.abs(power) ** 2))


def circle_majorant_check(D: TrigPolynomial, s: int) -> Verdict:
    """Compare int_0^1 |D(t)|^{2s} dt with the same integral for D_major.

    With frequencies 2*pi*k the polynomial is 1-periodic and the integral is the
    squared l2 norm of the s-fold coefficient convolution, computed exactly.

    Raises:
        NonIntegerFrequencies: If some frequency is not in 2*pi*Z.
        BudgetExceeded: If the convolution length s * (degree + 1) is too large.
    """
    _check_power(s)
    _, coeffs = _integer_coefficients(D)
    if s * coeffs.size > CONVOLUTION_BUDGET:
        raise BudgetExceeded(f"convolution length {s * coeffs.size} exceeds {CONVOLUTION_BUDGET}")
    _, major = _integer_coefficients(majorize(D))
    lhs = _circle_moment(coeffs, s)
    rhs = _circle_moment(major, s)
    return Verdict("circle_majorant", lhs, rhs, _holds(lhs, rhs), {"s": s, "terms": len(D.freqs)})


def _diffset_sum(D: TrigPolynomial, tees: FloatArray, s: int) -> float:
    diffs = np.subtract.outer(tees, tees)
    return float(np.sum(np.abs(D(diffs)) ** (2 * s)))


def diffset_majorant_check(D: TrigPolynomial, tees: ArrayLike, s: int) -> Verdict:
    """Compare sum_{t1, t2 in tees} |D(t1 - t2)|^{2s} with the same sum for D_major."""
    _check_power(s)
    points = np.asarray(tees, dtype=np.float64).reshape(-1)
    if points.size == 0:
        raise InvalidParameter("tees must be non-empty")
    work = points.size**2 * len(D.freqs)
    if work > DIFFSET_BUDGET:
        raise BudgetExceeded(f"|tees|^2 * |Phi| = {work} exceeds {DIFFSET_BUDGET}")
    lhs = _diffset_sum(D, points, s)
    rhs = _diffset_sum(majorize(D), points, s)
    return Verdict(
        "diffset_majorant", lhs, rhs, _holds(lhs, rhs), {"s": s, "tees": int(points.size)}
    )


@dataclass(frozen=True, eq=False)
class MajorantProfile:
    """|D_major(t)| for the Dirichlet majorant on a symmetric grid over [-T, T]."""

    N: int
    T: int
    step: float
    times: FloatArray
    values: FloatArray

    @property
    def max_value(self) -> float:
        """max |D_major(t)| over 1 <= t <= T."""
        mask = (self.times >= 1.0) & (self.times <= self.T)
        return float(self.values[mask].max()) if np.any(mask) else 0.0

    @property
    def ratio(self) -> float:
        """max_value / sqrt(N)."""
        return self.max_value / math.sqrt(self.N)

    def rows(self) -> list[tuple[float, float]]:
        return list(zip(self.times.tolist(), self.values.tolist(), strict=True))

    def to_dict(self) -> dict[str, Any]:
        return {
            "N": self.N,
            "T": self.T,
            "step": self.step,
            "max_value": self.max_value,
            "ratio": self.ratio,
        }


def dirichlet_polynomial(N: int) -> TrigPolynomial:
    """D_major(t) = sum_{N < n <= 2N} e^{it ln n}."""
    if N < 2:
        raise InvalidParameter(f"N must be >= 2, got {N}")
    return TrigPolynomial(FrequencySet.dirichlet(N), np.ones(N, dtype=np.complex128))


def dirichlet_majorant_profile(N: int, T: int, step: float = 0.25) -> MajorantProfile:
    """Sample |D_major| at t = k * step for |t| <= T."""
    if step <= 0 or T < 1:
        raise InvalidParameter(f"Need step > 0 and T >= 1, got step={step}, T={T}")
    half = math.floor(T / step)
    count = 2 * half + 1
    if count > SCAN_BUDGET:
        raise BudgetExceeded(f"{count} scan points exceed {SCAN_BUDGET}")
    D = dirichlet_polynomial(N)
    times = np.arange(-half, half + 1, dtype=np.float64) * step
    values = np.empty(count, dtype=np.float64)
    for start in range(0, count, SCAN_CHUNK):
        values[start : start + SCAN_CHUNK] = np.abs(D(times[start : start + SCAN_CHUNK]))
    profile = MajorantProfile(N=N, T=T, step=step, times=times, values=values)
    logger.debug("Dirichlet majorant N=%d T=%d: max %.4f (%.3f sqrt N)",
                 N, T, profile.max_value, profile.ratio)
    return profile


def symmetric_ap(step: float, J: int) -> FloatArray:
    """{j * step : |j| <= J}."""
    if J < 0:
        raise InvalidParameter(f"J must be >= 0, got {J}")
    return np.arange(-J, J + 1, dtype=np.float64) * step


def _ap_half_length(W: FloatArray) -> int:
    if W.size % 2 == 0:
        raise NotAnAP(f"a symmetric progression has odd size, got {W.size}")
    J = W.size // 2
    scale = max(1.0, float(np.max(np.abs(W))))
    if abs(W[J]) > 1e-9 * scale or not np.allclose(W, -W[::-1], rtol=0, atol=1e-9 * scale):
        raise NotAnAP("set is not symmetric about 0")
    if J > 0:
        gaps = np.diff(W)
        if gaps[0] <= 0 or np.max(np.abs(gaps - gaps[0])) > 1e-9 * scale:
            raise NotAnAP("set is not an arithmetic progression")
    return J


def ap_energy_bound_check(D: TrigPolynomial, W: ArrayLike, s: int = 1) -> Verdict:
    """sum_{t in W} |D(t)|^{2s} against (J+1)^{-1} sum_{t1,t2 in W} |D_major(t1-t2)|^{2s}.

    Each j*step with |j| <= J occurs 2J+1-|j| >= J+1 times in W - W, which makes
    the comparison an inequality at every finite size.
    """
    _check_power(s)
    if np.max(np.abs(D.coeffs)) > 1.0 + 1e-12:
        raise InvalidParameter("coefficients must satisfy |b| <= 1")
    points = np.sort(np.asarray(W, dtype=np.float64).reshape(-1))
    J = _ap_half_length(points)
    sum_on_w = float(np.sum(np.abs(D(points)) ** (2 * s)))
    hb_bound = _diffset_sum(majorize(D), points, s) / (J + 1)
    return Verdict(
        "ap_energy_bound", sum_on_w, hb_bound, _holds(sum_on_w, hb_bound), {"s": s, "J": J}
    )


def dirichlet_diffset_sides(N: int, tees: ArrayLike) -> Verdict:
    """Measure sum_{t1,t2} |D_major(t1-t2)|^2 against |tees| N^2 + |tees|^2 N.

    A measurement only; ``holds`` reports the comparison on this sample.
    """
    points = np.asarray(tees, dtype=np.float64).reshape(-1)
    if points.size == 0:
        raise InvalidParameter("tees must be non-empty")
    work = points.size**2 * N
    if work > DIFFSET_BUDGET:
        raise BudgetExceeded(f"|tees|^2 * N = {work} exceeds {DIFFSET_BUDGET}")
    lhs = _diffset_sum(dirichlet_polynomial(N), points, 1)
    size = float(points.size)
    rhs = size * N**2 + size**2 * N
    return Verdict("dirichlet_diffset", lhs, rhs, lhs <= rhs, {"N": N, "tees": int(points.size)})
