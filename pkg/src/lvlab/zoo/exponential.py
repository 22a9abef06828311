"""Exponential-sum matrices: M_Phi, M_Dir, M_AC and the periodic Schrodinger matrix."""

import numpy as np

from ..errors import InvalidParameter, Unsupported
from ..models import ComplexMatrix, FrequencySet

PS_MAX_FREQ = 32


def _check_degree(N: int, T: int) -> None:
    if N < 2:
        raise InvalidParameter(f"N must be >= 2, got {N}")
    if T < 1:
        raise InvalidParameter(f"T must be >= 1, got {T}")


def gen_freqset(phi: FrequencySet, T: int, kind: str | None = None) -> ComplexMatrix:
    """T x |Phi| matrix with entry (t, xi) = e^{i t xi}, t = 1..T."""
    if T < 1:
        raise InvalidParameter(f"T must be >= 1, got {T}")
    t = np.arange(1, T + 1, dtype=np.float64)
    data = np.exp(1j * np.outer(t, phi.freqs))
    return ComplexMatrix(data, kind=kind or f"freqset:{phi.label}")


def gen_dirichlet(N: int, T: int) -> ComplexMatrix:
    """M_Dir: entry (t, n) = n^{it} = e^{i t ln n}, columns n = N+1..2N."""
    _check_degree(N, T)
    return gen_freqset(FrequencySet.dirichlet(N), T, kind="dirichlet")


def gen_ac(N: int, T: int) -> ComplexMatrix:
    """M_AC: entry (t, n) = e^{i t sqrt(n/N)}, columns n = N+1..2N."""
    _check_degree(N, T)
    return gen_freqset(FrequencySet.almost_counterexample(N), T, kind="almost_counterexample")


def gen_periodic_schrodinger(Nfreq: int, d: int = 2) -> ComplexMatrix:
    """M_PS for d = 2: entry ((x, t), n) = e^{2 pi i (n x + n^2 t)}.

    Columns n = -N..N. Rows are x = a/(2N+1), a = 0..2N (x-major) and
    t = b/N^2, b = 0..N^2-1. The x grid has 2N+1 points so every pair of
    columns is separated by the x characters alone.
    """
    if d != 2:
        if d < 2:
            raise InvalidParameter(f"dimension must be >= 2, got {d}")
        raise Unsupported(f"periodic Schrodinger matrix only implemented for d = 2, got d={d}")
    if not 1 <= Nfreq <= PS_MAX_FREQ:
        raise InvalidParameter(f"Nfreq must be in [1, {PS_MAX_FREQ}], got {Nfreq}")
    N = Nfreq
    n = np.arange(-N, N + 1, dtype=np.int64)
    a = np.arange(2 * N + 1, dtype=np.int64)
    b = np.arange(N * N, dtype=np.int64)
    # Reduce phases exactly in integers before leaving Z.
    x_phase = np.mod(np.outer(a, n), 2 * N + 1) / (2 * N + 1)
    t_phase = np.mod(np.outer(b, n * n), N * N) / (N * N)
    phase = x_phase[:, None, :] + t_phase[None, :, :]
    data = np.exp(2j * np.pi * phase).reshape(-1, n.size)
    return ComplexMatrix(data, kind="periodic_schrodinger")
