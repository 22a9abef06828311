"""Fourier and additive structure of index sets and frequency sets.

Conventions: ``fourier_of_set`` uses W^(xi) = sum_t e^{+i xi t} by default;
``schatten_trace_fourier`` uses the e^{-i xi t} sign, under which
sum_i s_i(M_{Phi,W})^{2r} = sum over Phi^r of W^(xi_1-xi_2) ... W^(xi_r-xi_1)
holds exactly.
"""

import itertools
import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import BudgetExceeded, CapExceeded, GridTooSmall, InvalidParameter
from .models import ComplexArray, FloatArray, FrequencySet, IntegerSet

logger = logging.getLogger(__name__)

ENERGY_CAP = 100_000
TUPLE_BUDGET = 100_000_000
GRID_CAP = 10_000_000
KERNEL_TRUNCATION = 8.0
GRID_POINTS_PER_DELTA = 8
DEFAULT_KAPPA = 6.0
SUM_CHUNK = 512


def fourier_of_set(W: IntegerSet, xi: float, sign: int = 1) -> complex:
    """W^(xi) = sum_{t in W} e^{sign i xi t}."""
    return complex(_hat(W, np.asarray([xi], dtype=np.float64), sign)[0])


def _hat(W: IntegerSet, xis: FloatArray, sign: int) -> ComplexArray:
    if sign not in (1, -1):
        raise InvalidParameter(f"sign must be +1 or -1, got {sign}")
    t = W.elements.astype(np.float64)
    flat = xis.reshape(-1)
    values = np.exp(sign * 1j * np.multiply.outer(flat, t)).sum(axis=-1)
    return np.asarray(values.reshape(xis.shape), dtype=np.complex128)


def additive_energy(W: IntegerSet) -> int:
    """E(W) = #{(t1, t2, t3, t4) in W^4 : t1 + t2 = t3 + t4} = sum_s r(s)^2.

    The representation counts r(s) are kept in a table keyed by the sums that
    occur, so memory follows |W| rather than max(W).

    Raises:
        CapExceeded: If |W| > ENERGY_CAP.
    """
    size = len(W)
    if size > ENERGY_CAP:
        raise CapExceeded("additive energy |W|", size, ENERGY_CAP)
    if size == 0:
        return 0
    elements = W.elements
    keys = np.empty(0, dtype=np.int64)
    reps = np.empty(0, dtype=np.int64)
    for start in range(0, size, SUM_CHUNK):
        sums = (elements[start : start + SUM_CHUNK, None] + elements[None, :]).reshape(-1)
        chunk_keys, chunk_reps = np.unique(sums, return_counts=True)
        keys, inverse = np.unique(np.concatenate([keys, chunk_keys]), return_inverse=True)
        merged = np.concatenate([reps, chunk_reps]).astype(np.float64)
        reps = np.rint(np.bincount(inverse.reshape(-1), weights=merged)).astype(np.int64)
    return int(np.sum(reps * reps))


def additive_energy_dft(W: IntegerSet, grid_len: int) -> int:
    """E(W) as (1/L) sum_k |W^(2 pi k / L)|^4 on a grid of length L > 2 max(W)."""
    if len(W) == 0:
        return 0
    top = int(W.elements[-1])
    if grid_len <= 2 * top:
        raise GridTooSmall(f"grid_len must exceed 2*max(W) = {2 * top}, got {grid_len}")
    if grid_len > GRID_CAP:
        raise CapExceeded("energy DFT grid length", grid_len, GRID_CAP)
    indicator = np.zeros(grid_len, dtype=np.float64)
    indicator[W.elements] = 1.0
    spectrum = np.fft.fft(indicator)
    return int(round(float(np.sum(np.abs(spectrum) ** 4)) / grid_len))


def cyclic_diff_multiset(phi: FrequencySet, r: int) -> Iterator[tuple[float, ...]]:
    """Lazily yield (xi_1 - xi_2, ..., xi_r - xi_1) over all of Phi^r, with multiplicity."""
    if r not in (2, 3):
        raise InvalidParameter(f"r must be 2 or 3, got {r}")
    for combo in itertools.product(phi.freqs.tolist(), repeat=r):
        yield tuple(combo[k] - combo[(k + 1) % r] for k in range(r))


def cyclic_diff_array(phi: FrequencySet, r: int) -> FloatArray:
    """The cyclic difference multiset as a (|Phi|^r, r) array, in product order."""
    if r < 1:
        raise InvalidParameter(f"r must be >= 1, got {r}")
    count = len(phi) ** r
    if count > TUPLE_BUDGET:
        raise BudgetExceeded(f"|Phi|^r = {count} exceeds {TUPLE_BUDGET}")
    grids = np.meshgrid(*([phi.freqs] * r), indexing="ij")
    points = np.stack([g.reshape(-1) for g in grids], axis=1)
    return np.asarray(points - np.roll(points, -1, axis=1), dtype=np.float64)


def schatten_trace_fourier(phi: FrequencySet, W: IntegerSet, r: int) -> complex:
    """sum over (xi_1..xi_r) in Phi^r of W^(xi_1-xi_2) W^(xi_2-xi_3) ... W^(xi_r-xi_1).

    The cyclic sum over Phi^r is the trace of the r-th power of the
    |Phi| x |Phi| matrix H[a, b] = W^(xi_a - xi_b) with the e^{-i xi t} sign.

    Raises:
        BudgetExceeded: If |Phi|^r * |W| exceeds TUPLE_BUDGET.
    """
    if r < 1:
        raise InvalidParameter(f"r must be >= 1, got {r}")
    work = len(phi) ** r * max(len(W), 1)
    if work > TUPLE_BUDGET:
        raise BudgetExceeded(f"|Phi|^r * |W| = {work} exceeds {TUPLE_BUDGET}")
    diffs = np.subtract.outer(phi.freqs, phi.freqs)
    H = _hat(W, diffs, sign=-1)
    return complex(np.trace(np.linalg.matrix_power(H, r)))


@dataclass(frozen=True, eq=False)
class DensityProfile:
    """Smoothed density of the pairwise difference multiset on a uniform grid."""

    grid: FloatArray
    values: FloatArray
    delta: float
    total: int

    @property
    def spacing(self) -> float:
        return float(self.grid[1] - self.grid[0]) if self.grid.size > 1 else 0.0

    def mass(self) -> float:
        return float(np.sum(self.values) * self.spacing)

    def mass_between(self, lo: float, hi: float) -> float:
        """Integral of the density over grid points in [lo, hi]."""
        mask = (self.grid >= lo) & (self.grid <= hi)
        return float(np.sum(self.values[mask]) * self.spacing)

    def rows(self) -> list[tuple[float, float]]:
        return list(zip(self.grid.tolist(), self.values.tolist(), strict=True))


def density_profile(
    phi: FrequencySet, delta: float, grid_len: int | None = None
) -> DensityProfile:
    """Gaussian-smoothed density of Phi - Phi (kernel std ``delta``, cut at 8 delta).

    Differences are linearly binned onto the grid and convolved with a
    discretized kernel normalized to unit mass, so the profile integrates to
    |Phi|^2 up to rounding. The grid covers the difference range padded by the
    kernel cut; ``grid_len`` defaults to eight points per ``delta``.
    """
    if delta <= 0:
        raise InvalidParameter(f"delta must be > 0, got {delta}")
    diffs = cyclic_diff_array(phi, 2)[:, 0]
    pad = KERNEL_TRUNCATION * delta
    lo, hi = float(diffs.min()) - pad, float(diffs.max()) + pad
    if grid_len is None:
        grid_len = int(math.ceil((hi - lo) * GRID_POINTS_PER_DELTA / delta)) + 1
    if grid_len > GRID_CAP:
        raise BudgetExceeded(f"density grid of {grid_len} points exceeds {GRID_CAP}")
    if grid_len < 3:
        raise InvalidParameter(f"grid_len must be >= 3, got {grid_len}")
    grid = np.linspace(lo, hi, grid_len)
    h = float(grid[1] - grid[0])

    position = (diffs - lo) / h
    left = np.clip(np.floor(position).astype(np.int64), 0, grid_len - 2)
    frac = position - left
    binned = np.bincount(left, weights=1.0 - frac, minlength=grid_len)
    binned += np.bincount(left + 1, weights=frac, minlength=grid_len)

    reach = int(math.ceil(pad / h))
    offsets = np.arange(-reach, reach + 1) * h
    kernel = np.exp(-0.5 * (offsets / delta) ** 2)
    kernel /= kernel.sum() * h
    values = np.convolve(binned, kernel, mode="same")
    if kernel.size > grid_len:
        # np.convolve "same" follows the longer input; re-centre on the grid.
        start = (kernel.size - grid_len) // 2
        values = values[start : start + grid_len]
    logger.debug("density profile: %d differences on %d points", diffs.size, grid_len)
    return DensityProfile(
        grid=grid, values=np.maximum(values, 0.0), delta=delta, total=int(diffs.size)
    )


@dataclass(frozen=True)
class Spike:
    """A difference spike at ln(p/q)."""

    location: float
    p: int
    q: int
    count: int
    mass: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "q": self.q,
            "location": self.location,
            "count": self.count,
            "mass": self.mass,
        }


@dataclass(frozen=True)
class SpikeReport:
    """Split of the difference density into spike windows and a smooth residual."""

    spikes: tuple[Spike, ...]
    residual_mass: float
    smooth_level: float
    spike_level: float
    contrast: float
    delta: float
    kappa: float
    cap: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "spikes": [s.to_dict() for s in self.spikes],
            "residual_mass": self.residual_mass,
            "smooth_level": self.smooth_level,
            "spike_level": self.spike_level,
            "contrast": self.contrast,
            "delta": self.delta,
            "kappa": self.kappa,
            "cap": self.cap,
        }


def _lattice_count(N: int, p: int, q: int) -> int:
    """#{m : N < p m <= 2N and N < q m <= 2N}."""
    lo = max(N // p, N // q) + 1
    hi = min(2 * N // p, 2 * N // q)
    return max(0, hi - lo + 1)


def spike_report(
    N: int,
    T: int,
    delta: float | None = None,
    phi: FrequencySet | None = None,
    kappa: float = DEFAULT_KAPPA,
) -> SpikeReport:
    """Spike/smooth split of the difference density at the rational spikes ln(p/q).

    Args:
        N: Degree; spikes are enumerated for coprime 1 <= p, q <= ceil(2T/N).
        T: Length scale; ``delta`` defaults to 1/T.
        delta: Kernel standard deviation.
        phi: Frequencies whose differences are analysed (default: Dirichlet ln n).
        kappa: Window width in units of delta (window is +-kappa*delta/2).

    Returns:
        A SpikeReport. ``count`` is the exact lattice count of pairs
        (n1, n2) in (N, 2N]^2 with n1/n2 = p/q; ``mass`` is the smoothed
        density integrated over the window.
    """
    if N < 2 or T < 1:
        raise InvalidParameter(f"Need N >= 2 and T >= 1, got N={N}, T={T}")
    delta = 1.0 / T if delta is None else delta
    phi = FrequencySet.dirichlet(N) if phi is None else phi
    profile = density_profile(phi, delta)
    cap = math.ceil(2 * T / N)
    half = kappa * delta / 2

    pairs = [
        (p, q) for p in range(1, cap + 1) for q in range(1, cap + 1) if math.gcd(p, q) == 1
    ]
    pairs.sort(key=lambda pq: math.log(pq[0] / pq[1]))
    covered = np.zeros(profile.grid.size, dtype=bool)
    spikes = []
    for p, q in pairs:
        location = math.log(p / q)
        window = (profile.grid >= location - half) & (profile.grid <= location + half)
        covered |= window
        spikes.append(
            Spike(
                location=location,
                p=p,
                q=q,
                count=_lattice_count(N, p, q),
                mass=profile.mass_between(location - half, location + half),
            )
        )

    h = profile.spacing
    total_mass = profile.mass()
    spike_mass = float(np.sum(profile.values[covered]) * h)
    residual_mass = total_mass - spike_mass
    covered_len = float(np.count_nonzero(covered)) * h
    residual_len = float(np.count_nonzero(~covered)) * h
    spike_level = spike_mass / covered_len if covered_len > 0 else 0.0
    smooth_level = residual_mass / residual_len if residual_len > 0 else 0.0
    contrast = spike_level / smooth_level if smooth_level > 0 else math.inf
    logger.debug("spike report: %d spikes, contrast %.4f", len(spikes), contrast)
    return SpikeReport(
        spikes=tuple(spikes),
        residual_mass=residual_mass,
        smooth_level=smooth_level,
        spike_level=spike_level,
        contrast=contrast,
        delta=delta,
        kappa=kappa,
        cap=cap,
    )
