"""Ground truth: sparse singular values and explicit large value witnesses."""

import itertools
import logging
import math
from collections.abc import Iterator
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import CapExceeded, InvalidParameter
from .linalg import gram
from .models import ComplexArray, ComplexMatrix, IntArray, RowSubset, Witness

logger = logging.getLogger(__name__)

ENUMERATION_CAP = 10_000_000
CHUNK_SIZE = 20_000
NORMS = ("linf", "l2")


def _check_size(M: ComplexMatrix, S: int) -> None:
    if not 1 <= S <= M.T:
        raise InvalidParameter(f"Subset size must be in [1, T={M.T}], got {S}")


def _chunks(T: int, S: int) -> Iterator[IntArray]:
    combos = itertools.combinations(range(T), S)
    while True:
        block = list(itertools.islice(combos, CHUNK_SIZE))
        if not block:
            return
        yield np.asarray(block, dtype=np.int64)


def _best_in_chunk(A: ComplexArray, idx: IntArray) -> tuple[float, int]:
    minors = A[idx[:, :, None], idx[:, None, :]]
    tops = np.linalg.eigvalsh(minors)[:, -1]
    pos = int(np.argmax(tops))
    return float(tops[pos]), pos


def ssv_exact(M: ComplexMatrix, S: int, threads: int = 1) -> tuple[float, RowSubset]:
    """max over |W| = S of ||M_W||, by enumerating all row subsets.

    Subsets are visited in lexicographic order in fixed-size chunks; each chunk
    takes the top eigenvalue of every Gram minor in one batched call. Exact ties
    go to the lexicographically smallest subset, independent of ``threads``.

    Raises:
        CapExceeded: If C(T, S) exceeds ENUMERATION_CAP.
    """
    _check_size(M, S)
    count = math.comb(M.T, S)
    if count > ENUMERATION_CAP:
        raise CapExceeded("subset enumeration C(T, S)", count, ENUMERATION_CAP)
    A = gram(M).data
    logger.debug("enumerating %d subsets of size %d", count, S)

    best_value, best_subset = -math.inf, np.arange(S)
    chunks = _chunks(M.T, S)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        while True:
            batch = list(itertools.islice(chunks, max(1, threads)))
            if not batch:
                break
            for idx, (value, pos) in zip(
                batch, pool.map(lambda block: _best_in_chunk(A, block), batch), strict=True
            ):
                if value > best_value:
                    best_value, best_subset = value, idx[pos]
    return math.sqrt(max(best_value, 0.0)), RowSubset.from_zero_based(best_subset.tolist())


def _minor_top(A: ComplexArray, idx: IntArray) -> float:
    return float(np.linalg.eigvalsh(A[np.ix_(idx, idx)])[-1])


def ssv_search(
    M: ComplexMatrix, S: int, seed: int = 0, iters: int = 2000
) -> tuple[float, RowSubset]:
    """Lower bound on the size-S sparse singular value by swap local search.

    Random starts are improved by first-improvement single-element swaps until
    a local optimum; restarts continue until ``iters`` subset evaluations have
    been spent.
    """
    _check_size(M, S)
    if iters < 1:
        raise InvalidParameter(f"iters must be >= 1, got {iters}")
    A = gram(M).data
    rng = np.random.default_rng(seed)
    T = M.T
    best_value, best_key = -math.inf, tuple(range(S))
    evaluations = 0
    starts = 0

    while evaluations < iters:
        starts += 1
        current = np.sort(rng.choice(T, size=S, replace=False))
        value = _minor_top(A, current)
        evaluations += 1
        improved = True
        while improved and evaluations < iters:
            improved = False
            outside = np.setdiff1d(np.arange(T), current)
            for pos in rng.permutation(S):
                for candidate in rng.permutation(outside):
                    trial = current.copy()
                    trial[pos] = candidate
                    trial.sort()
                    trial_value = _minor_top(A, trial)
                    evaluations += 1
                    if trial_value > value:
                        current, value, improved = trial, trial_value, True
                        break
                    if evaluations >= iters:
                        break
                if improved or evaluations >= iters:
                    break
        key = tuple(int(i) for i in current)
        if value > best_value or (value == best_value and key < best_key):
            best_value, best_key = value, key

    logger.debug("swap search: %d starts, %d evaluations", starts, evaluations)
    return math.sqrt(max(best_value, 0.0)), RowSubset.from_zero_based(best_key)


def ssv_eta(
    M: ComplexMatrix, eta: float, seed: int = 0, iters: int = 2000
) -> tuple[float, RowSubset]:
    """max over |W| <= eta T of ||M_W||; exact under the enumeration cap, else searched."""
    if not 0 < eta <= 1:
        raise InvalidParameter(f"eta must be in (0, 1], got {eta}")
    S = math.floor(eta * M.T)
    if S < 1:
        raise InvalidParameter(f"eta * T = {eta * M.T} leaves no rows")
    # ||M_W|| is monotone under adding rows, so the maximum sits at |W| = S.
    if math.comb(M.T, S) <= ENUMERATION_CAP:
        return ssv_exact(M, S)
    return ssv_search(M, S, seed=seed, iters=iters)


def witness_focusing(
    M: ComplexMatrix,
    U: RowSubset,
    lam: float,
    scale: float | None = None,
    clip: bool = True,
) -> Witness:
    """b = scale * sum_{t in U} conj(M_t), optionally clipped into the unit l-infinity ball.

    The default scale is |U|^{-1/2}, which keeps |b_n| of order one for
    unit-modulus rows.
    """
    U.check_within(M.T)
    factor = 1.0 / math.sqrt(len(U)) if scale is None else scale
    b = factor * M.data[U.zero_based()].conj().sum(axis=0)
    clipped = False
    if clip:
        moduli = np.abs(b)
        clipped = bool(np.any(moduli > 1.0))
        b = b / np.maximum(1.0, moduli)
    return Witness.from_input(M, b, lam, clipped=clipped)


def witness_random(
    M: ComplexMatrix,
    lam: float,
    norm: str = "linf",
    budget: float | None = None,
    seed: int = 0,
    iters: int = 20,
) -> Witness:
    """Best of ``iters`` random inputs: random signs (linf) or a normalized complex Gaussian (l2).

    Args:
        M: The matrix.
        lam: Threshold.
        norm: "linf" draws budget * (+-1) entries (budget defaults to 1); "l2"
            draws a complex Gaussian scaled to ||b|| = budget (defaults to sqrt(N)).
        budget: Norm of the drawn inputs.
        seed: Seed for ``numpy.random.default_rng``.
        iters: Number of draws; ties keep the earliest draw.

    Returns:
        The witness with the largest achieved set.
    """
    if norm not in NORMS:
        raise InvalidParameter(f"Unknown norm '{norm}', expected one of {NORMS}")
    if iters < 1:
        raise InvalidParameter(f"iters must be >= 1, got {iters}")
    rng = np.random.default_rng(seed)
    best: Witness | None = None
    for _ in range(iters):
        if norm == "linf":
            size = 1.0 if budget is None else budget
            b = size * rng.choice(np.array([-1.0, 1.0]), size=M.N)
        else:
            size = math.sqrt(M.N) if budget is None else budget
            g = rng.standard_normal(M.N) + 1j * rng.standard_normal(M.N)
            b = size * g / np.linalg.norm(g)
        witness = Witness.from_input(M, b, lam)
        if best is None or len(witness.achieved) > len(best.achieved):
            best = witness
    assert best is not None
    return best
