"""Explicit large-value constructions: the almost counterexample and fat progressions."""

import logging
import math

import numpy as np
from scipy.optimize import brentq

from ..errors import BudgetExceeded, IntervalOutOfRange, InvalidParameter, NoSquares
from ..models import (
    CounterexampleInstance,
    FatAPInstance,
    FloatArray,
    FrequencySet,
    TrigPolynomial,
)
from .exponential import gen_ac

logger = logging.getLogger(__name__)

SCAN_BUDGET = 10_000_000
SIGMA_SHARP = 0.75


def _geometric_modulus(length: int, theta: FloatArray) -> FloatArray:
    """|sum_{m<length} e^{i m theta}| with the removable singularity at theta = 0."""
    half = np.asarray(theta, dtype=np.float64) / 2
    out = np.full(half.shape, float(length))
    nonzero = np.abs(np.sin(half)) > 1e-15
    out[nonzero] = np.abs(np.sin(length * half[nonzero]) / np.sin(half[nonzero]))
    return out


def gen_almost_counterexample(
    N: int, T: int, sigma: float = SIGMA_SHARP, integer_times: bool = False
) -> CounterexampleInstance:
    """Coefficients on squares in (N, 2N] making D~ large on a 1-separated set.

    For n = m^2 the frequency sqrt(n/N) = m/sqrt(N), so D~ restricted to squares
    is a geometric series with period 2 pi sqrt(N). At sigma = 3/4 every square
    gets height N^(1/4) and the witnesses are the multiples of the period in
    [0, T]. Below 3/4 only the first round(N^(2 sigma - 1)) squares are used at
    the height saturating sum |b_n|^2 = N, and every integer offset inside the
    fattened peak around each multiple is a witness too.
    """
    if N < 2:
        raise InvalidParameter(f"N must be >= 2, got {N}")
    if not 0.5 <= sigma <= SIGMA_SHARP:
        raise InvalidParameter(f"sigma must be in [1/2, 3/4], got {sigma}")
    m_lo, m_hi = math.isqrt(N) + 1, math.isqrt(2 * N)
    squares_available = max(0, m_hi - m_lo + 1)
    if squares_available == 0:
        raise NoSquares(f"no perfect square in ({N}, {2 * N}]", N=N)

    sharp = abs(sigma - SIGMA_SHARP) < 1e-12
    if sharp:
        length = squares_available
        height = N**0.25
        radius = 0
    else:
        length = min(squares_available, max(1, round(N ** (2 * sigma - 1))))
        height = math.sqrt(N / length)
        radius = math.floor(math.sqrt(N) / length)

    coeffs = np.zeros(N, dtype=np.complex128)
    roots = np.arange(m_lo, m_lo + length)
    coeffs[roots * roots - (N + 1)] = height

    period = 2.0 * math.pi * math.sqrt(N)
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    multiples = np.arange(0, math.floor(T / period) + 1, dtype=np.float64)
    times = (multiples[:, None] * period + offsets[None, :]).reshape(-1)
    offs = np.broadcast_to(offsets, (multiples.size, offsets.size)).reshape(-1)
    keep = (times >= 0) & (times <= T)
    times, offs = times[keep], offs[keep]
    order = np.argsort(times, kind="stable")
    times, offs = times[order], offs[order]

    if integer_times:
        # Rounded times leave the exact peaks, so record the evaluated modulus.
        times = np.unique(np.rint(times))
        times = times[(times >= 0) & (times <= T)]
        poly = TrigPolynomial(FrequencySet.almost_counterexample(N), coeffs)
        guarantee = np.abs(poly(times))
    else:
        guarantee = height * _geometric_modulus(length, offs / math.sqrt(N))
    logger.debug("almost counterexample N=%d L=%d witnesses=%d", N, length, times.size)
    return CounterexampleInstance(
        matrix=gen_ac(N, T),
        coeffs=coeffs,
        witness_times=times,
        guarantee=guarantee,
        N=N,
        T=T,
        sigma=sigma,
        progression_len=length,
        height=height,
    )


def _half_width_ratio() -> float:
    """x* with sin(x)/x = 1/2: |geometric series| >= L/2 while L theta / 2 <= x*."""
    return float(brentq(lambda x: math.sin(x) / x - 0.5, 1.0, 2.5))


def gen_fat_ap(N: int, T: int, interval_start: int, step: float = 0.25) -> FatAPInstance:
    """Dirichlet sum over the short interval I = {n_I+1, ..., n_I+L} at critical length.

    L = round(N T^(-1/2)). Near t = 0 the sum is a geometric series with ratio
    e^{i t / n_c} (n_c the interval centre), so its large values repeat with
    step 2 pi n_c and stay above L/2 within the fattening radius
    2 x* n_c / L. The scan over [0, T] records the empirical I*.
    """
    if N < 2 or T < 1:
        raise InvalidParameter(f"need N >= 2 and T >= 1, got N={N}, T={T}")
    length = round(N / math.sqrt(T))
    if length < 2:
        raise InvalidParameter(f"critical length round(N/sqrt(T)) = {length} must be >= 2")
    if interval_start < N or interval_start + length > 2 * N:
        raise IntervalOutOfRange(
            f"interval ({interval_start}, {interval_start + length}] not inside ({N}, {2 * N}]",
            interval_start=interval_start,
            length=length,
        )
    if step <= 0 or T / step > SCAN_BUDGET:
        raise BudgetExceeded(f"scan of [0, {T}] with step {step} exceeds {SCAN_BUDGET} points")

    n = np.arange(interval_start + 1, interval_start + length + 1, dtype=np.float64)
    coeffs = np.zeros(N, dtype=np.float64)
    coeffs[interval_start - N : interval_start - N + length] = 1.0

    times = np.arange(0.0, T + step / 2, step)
    times = times[times <= T]
    values = np.empty(times.size)
    for lo in range(0, times.size, 65536):
        chunk = times[lo : lo + 65536]
        values[lo : lo + chunk.size] = np.abs(np.exp(1j * np.outer(chunk, np.log(n))).sum(axis=1))

    centre = interval_start + (length + 1) / 2
    return FatAPInstance(
        N=N,
        T=T,
        interval_start=interval_start,
        interval_len=length,
        coeffs=coeffs,
        progression_step=2.0 * math.pi * centre,
        fattening_radius=2.0 * _half_width_ratio() * centre / length,
        scan_times=times,
        scan_values=values,
    )
