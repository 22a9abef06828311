"""Seeded random ensembles: i.i.d. matrices and the planted sparse-vector model."""

import logging
import math

import numpy as np

from ..errors import DegenerateSize, InvalidParameter
from ..models import ComplexMatrix, FloatArray, PlantedInstance, PlantedParams, RowSubset

logger = logging.getLogger(__name__)

DISTRIBUTIONS = ("unit-complex", "pm1", "gaussian")
W_SCALES = ("std", "variance")


def gen_random(T: int, N: int, dist: str = "gaussian", seed: int = 0) -> ComplexMatrix:
    """T x N matrix with i.i.d. entries from ``dist``; bit-reproducible per seed."""
    if T < 1 or N < 1:
        raise InvalidParameter(f"T and N must be >= 1, got T={T}, N={N}")
    rng = np.random.default_rng(seed)
    if dist == "unit-complex":
        data = np.exp(2j * np.pi * rng.random((T, N)))
    elif dist == "pm1":
        data = (2 * rng.integers(0, 2, size=(T, N)) - 1).astype(np.complex128)
    elif dist == "gaussian":
        data = rng.standard_normal((T, N)).astype(np.complex128)
    else:
        raise InvalidParameter(f"Unknown distribution: {dist}")
    return ComplexMatrix(data, kind=f"random:{dist}")


def haar_orthogonal(N: int, rng: np.random.Generator) -> FloatArray:
    """Haar-distributed orthogonal N x N matrix (QR with sign-fixed R diagonal)."""
    Q, R = np.linalg.qr(rng.standard_normal((N, N)))
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return np.asarray(Q * signs, dtype=np.float64)


def gen_planted(
    N: int,
    alpha: float,
    sigma: float,
    epsilon: float,
    seed: int = 0,
    w_scale: str = "std",
) -> PlantedInstance:
    """Random Gaussian matrix hiding a sparse vector w in its column space.

    Steps: T = round(N^alpha) and S = round(N^(alpha+1-2sigma-epsilon));
    pick a support W of size S; draw w on W with scale (T/S)^(1/2) (a standard
    deviation when ``w_scale="std"``, a variance when ``"variance"``); put w
    as the first column of an otherwise i.i.d. N(0,1) matrix A; rotate by a
    Haar orthogonal O. Then M v = sqrt(N) w for v = O^T (sqrt(N) e_1).
    """
    if not 1 < alpha < 2:
        raise InvalidParameter(f"alpha must be in (1, 2), got {alpha}")
    if not 0.5 < sigma < 1:
        raise InvalidParameter(f"sigma must be in (1/2, 1), got {sigma}")
    if epsilon <= 0:
        raise InvalidParameter(f"epsilon must be > 0, got {epsilon}")
    if w_scale not in W_SCALES:
        raise InvalidParameter(f"Unknown w_scale: {w_scale}")
    params = PlantedParams(N=N, alpha=alpha, sigma=sigma, epsilon=epsilon, seed=seed,
                           w_scale=w_scale)
    T, S = params.T, params.S
    if S < 1 or S > T:
        raise DegenerateSize(f"support size S={S} outside [1, T={T}]", S=S, T=T)

    rng = np.random.default_rng(seed)
    support = np.sort(rng.choice(T, size=S, replace=False))
    scale = math.sqrt(T / S)
    std = scale if w_scale == "std" else math.sqrt(scale)
    w = np.zeros(T, dtype=np.float64)
    w[support] = rng.normal(0.0, std, size=S)

    A = rng.standard_normal((T, N))
    A[:, 0] = w
    O = haar_orthogonal(N, rng)
    v = math.sqrt(N) * O[0, :].copy()
    logger.debug("planted instance N=%d T=%d S=%d seed=%d", N, T, S, seed)
    return PlantedInstance(
        matrix=ComplexMatrix(A @ O, kind="planted"),
        support=RowSubset.from_zero_based(support),
        sparse_vector=w,
        input_witness=v,
        params=params,
        A=A,
        O=O,
    )
