"""Data models for matrices, index sets, frequency sets and constructions."""

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import InvalidParameter

FloatArray = NDArray[np.float64]
ComplexArray = NDArray[np.complex128]
IntArray = NDArray[np.int64]


def _frozen(array: NDArray[Any]) -> NDArray[Any]:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """A dense T x N complex matrix; rows are t = 1..T, columns n-index 1..N."""

    data: ComplexArray
    kind: str = "custom"

    def __post_init__(self) -> None:
        array = np.array(self.data, dtype=np.complex128, copy=True)
        if array.ndim != 2:
            raise InvalidParameter(f"Matrix must be 2-dimensional, got ndim={array.ndim}")
        if array.shape[0] < 1 or array.shape[1] < 1:
            raise InvalidParameter(f"Matrix must be at least 1x1, got {array.shape}")
        if not np.all(np.isfinite(array)):
            raise InvalidParameter("Matrix entries must be finite")
        object.__setattr__(self, "data", _frozen(array))

    @property
    def T(self) -> int:
        return int(self.data.shape[0])

    @property
    def N(self) -> int:
        return int(self.data.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return self.T, self.N

    def is_real(self, atol: float = 0.0) -> bool:
        """True if every entry has zero imaginary part (up to atol)."""
        return bool(np.all(np.abs(self.data.imag) <= atol))

    def adjoint(self) -> "ComplexMatrix":
        """Conjugate transpose M*."""
        return ComplexMatrix(self.data.conj().T, kind=f"{self.kind}*")

    def rows(self, subset: "RowSubset") -> "ComplexMatrix":
        """Row-submatrix M_W."""
        subset.check_within(self.T)
        return ComplexMatrix(self.data[subset.zero_based()], kind=f"{self.kind}[W]")

    def apply(self, b: ArrayLike) -> ComplexArray:
        """Matrix-vector product Mb."""
        vec = np.asarray(b, dtype=np.complex128)
        if vec.shape != (self.N,):
            raise InvalidParameter(f"Input vector must have length {self.N}, got {vec.shape}")
        return self.data @ vec

    def to_dict(self) -> dict[str, Any]:
        return {"T": self.T, "N": self.N, "kind": self.kind}


@dataclass(frozen=True, eq=False)
class SingularSpectrum:
    """Singular values s_1 >= s_2 >= ... >= s_min(T,N) >= 0."""

    values: FloatArray

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=np.float64, copy=True)
        if vals.ndim != 1 or vals.size == 0:
            raise InvalidParameter("Spectrum must be a non-empty 1-d sequence")
        if np.any(vals < 0) or np.any(np.diff(vals) > 0):
            raise InvalidParameter("Spectrum must be non-negative and non-increasing")
        object.__setattr__(self, "values", _frozen(vals))

    @property
    def top(self) -> float:
        return float(self.values[0])

    def __len__(self) -> int:
        return int(self.values.size)

    def __getitem__(self, i: int) -> float:
        return float(self.values[i])


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Hermitian Gram matrix A = M M*."""

    data: ComplexArray

    def __post_init__(self) -> None:
        array = np.array(self.data, dtype=np.complex128, copy=True)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise InvalidParameter(f"Gram matrix must be square, got {array.shape}")
        scale = max(1.0, float(np.max(np.abs(array))))
        if np.max(np.abs(array - array.conj().T)) > 1e-12 * scale:
            raise InvalidParameter("Gram matrix must be Hermitian")
        if np.any(array.diagonal().real < -1e-12 * scale):
            raise InvalidParameter("Gram matrix diagonal must be non-negative")
        object.__setattr__(self, "data", _frozen(array))

    @property
    def dim(self) -> int:
        return int(self.data.shape[0])

    def diagonal(self) -> FloatArray:
        return np.asarray(self.data.diagonal().real, dtype=np.float64)

    def diag_max(self) -> float:
        return float(np.max(self.diagonal()))

    def offdiag_max(self) -> float:
        """max_{i != i'} |A_{i,i'}|; zero for a 1x1 Gram matrix."""
        if self.dim == 1:
            return 0.0
        moduli = np.abs(self.data)
        np.fill_diagonal(moduli, 0.0)
        return float(np.max(moduli))

    def minor(self, subset: "RowSubset") -> ComplexArray:
        """Principal minor A_W = M_W M_W*."""
        idx = subset.zero_based()
        return self.data[np.ix_(idx, idx)]


@dataclass(frozen=True)
class RowSubset:
    """Strictly increasing, non-empty row indices W within {1..T} (1-based)."""

    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        idx = tuple(int(i) for i in self.indices)
        if not idx:
            raise InvalidParameter("RowSubset must be non-empty")
        if idx[0] < 1 or any(b <= a for a, b in zip(idx, idx[1:], strict=False)):
            raise InvalidParameter(f"RowSubset must be strictly increasing from 1: {idx}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def from_zero_based(cls, indices: Iterable[int]) -> "RowSubset":
        return cls(tuple(sorted(int(i) + 1 for i in indices)))

    def zero_based(self) -> IntArray:
        return np.asarray(self.indices, dtype=np.int64) - 1

    def check_within(self, T: int) -> None:
        if self.indices[-1] > T:
            raise InvalidParameter(f"RowSubset index {self.indices[-1]} exceeds T={T}")

    def indicator(self, T: int) -> FloatArray:
        """The vector 1_W in R^T."""
        self.check_within(T)
        vec = np.zeros(T, dtype=np.float64)
        vec[self.zero_based()] = 1.0
        return vec

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)


@dataclass(frozen=True, eq=False)
class FrequencySet:
    """Finite multiset of real frequencies Phi (radians per unit t)."""

    freqs: FloatArray
    label: str = "custom"

    def __post_init__(self) -> None:
        vals = np.array(self.freqs, dtype=np.float64, copy=True).reshape(-1)
        if vals.size == 0:
            raise InvalidParameter("FrequencySet must be non-empty")
        if not np.all(np.isfinite(vals)):
            raise InvalidParameter("Frequencies must be finite")
        object.__setattr__(self, "freqs", _frozen(vals))

    @classmethod
    def dirichlet(cls, N: int) -> "FrequencySet":
        """{ln n : N < n <= 2N}."""
        n = np.arange(N + 1, 2 * N + 1, dtype=np.float64)
        return cls(np.log(n), label=f"dirichlet(N={N})")

    @classmethod
    def almost_counterexample(cls, N: int) -> "FrequencySet":
        """{sqrt(n/N) : N < n <= 2N}."""
        n = np.arange(N + 1, 2 * N + 1, dtype=np.float64)
        return cls(np.sqrt(n / N), label=f"almost_counterexample(N={N})")

    @classmethod
    def dft(cls, T: int) -> "FrequencySet":
        """{2 pi k / T : k = 0..T-1}."""
        return cls(2.0 * np.pi * np.arange(T) / T, label=f"dft(T={T})")

    def __len__(self) -> int:
        return int(self.freqs.size)


@dataclass(frozen=True, eq=False)
class IntegerSet:
    """Strictly increasing non-negative integers W within Z and [0, T]."""

    elements: IntArray

    def __post_init__(self) -> None:
        vals = np.array(self.elements, dtype=np.int64, copy=True).reshape(-1)
        if vals.size and (vals[0] < 0 or np.any(np.diff(vals) <= 0)):
            raise InvalidParameter("IntegerSet must be strictly increasing and non-negative")
        object.__setattr__(self, "elements", _frozen(vals))

    @classmethod
    def from_iterable(cls, values: Iterable[int]) -> "IntegerSet":
        """Build from any iterable, sorting and removing duplicates."""
        return cls(np.unique(np.fromiter((int(v) for v in values), dtype=np.int64)))

    def __len__(self) -> int:
        return int(self.elements.size)


@dataclass(frozen=True, eq=False)
class TrigPolynomial:
    """D(t) = sum_xi b_xi e^{i t xi}."""

    freqs: FrequencySet
    coeffs: ComplexArray

    def __post_init__(self) -> None:
        coeffs = np.array(self.coeffs, dtype=np.complex128, copy=True).reshape(-1)
        if coeffs.size != len(self.freqs):
            raise InvalidParameter(
                f"Coefficient count {coeffs.size} does not match {len(self.freqs)} frequencies"
            )
        object.__setattr__(self, "coeffs", _frozen(coeffs))

    def __call__(self, t: ArrayLike) -> ComplexArray:
        times = np.asarray(t, dtype=np.float64)
        phases = np.exp(1j * np.multiply.outer(times, self.freqs.freqs))
        return np.asarray(phases @ self.coeffs, dtype=np.complex128)


@dataclass(frozen=True)
class PlantedParams:
    """Parameters of one planted instance."""

    N: int
    alpha: float
    sigma: float
    epsilon: float
    seed: int
    w_scale: str = "std"

    @property
    def T(self) -> int:
        return round(self.N**self.alpha)

    @property
    def S(self) -> int:
        return round(self.N ** (self.alpha + 1 - 2 * self.sigma - self.epsilon))


@dataclass(frozen=True, eq=False)
class PlantedInstance:
    """M = A O with a hidden sparse column w of A and input witness v = O^T (sqrt(N) e_1)."""

    matrix: ComplexMatrix
    support: RowSubset
    sparse_vector: FloatArray
    input_witness: FloatArray
    params: PlantedParams
    A: FloatArray = field(repr=False)
    O: FloatArray = field(repr=False)

    def reconstruct(self) -> FloatArray:
        return np.asarray(self.A @ self.O, dtype=np.float64)

    def to_dict(self) -> dict[str, Any]:
        return {
            "N": self.params.N,
            "T": self.matrix.T,
            "S": len(self.support),
            "alpha": self.params.alpha,
            "sigma": self.params.sigma,
            "epsilon": self.params.epsilon,
            "seed": self.params.seed,
            "w_scale": self.params.w_scale,
            "support": list(self.support.indices),
        }


@dataclass(frozen=True, eq=False)
class CounterexampleInstance:
    """Square-supported coefficients making D~(t) = sum b_n e^{it sqrt(n/N)} large on W."""

    matrix: ComplexMatrix
    coeffs: ComplexArray
    witness_times: FloatArray
    guarantee: FloatArray
    N: int
    T: int
    sigma: float
    progression_len: int
    height: float

    @property
    def period(self) -> float:
        return 2.0 * math.pi * math.sqrt(self.N)

    def evaluate(self, t: ArrayLike) -> ComplexArray:
        """D~(t) at arbitrary real times."""
        return TrigPolynomial(FrequencySet.almost_counterexample(self.N), self.coeffs)(t)

    def budget_used(self) -> float:
        """sum |b_n|^2 (must stay <= N)."""
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def to_dict(self) -> dict[str, Any]:
        return {
            "N": self.N,
            "T": self.T,
            "sigma": self.sigma,
            "progression_len": self.progression_len,
            "height": self.height,
            "budget_used": self.budget_used(),
            "witness_times": self.witness_times.tolist(),
            "guarantee": self.guarantee.tolist(),
        }


@dataclass(frozen=True, eq=False)
class FatAPInstance:
    """Short Dirichlet sum over I = {n_I+1..n_I+L} and its scanned large-value set I*."""

    N: int
    T: int
    interval_start: int
    interval_len: int
    coeffs: FloatArray
    progression_step: float
    fattening_radius: float
    scan_times: FloatArray
    scan_values: FloatArray

    @property
    def large_times(self) -> FloatArray:
        """Empirical I*: scanned times with |D_I(t)| >= L/2."""
        mask = self.scan_values >= self.interval_len / 2
        return np.asarray(self.scan_times[mask], dtype=np.float64)

    def residues(self) -> FloatArray:
        """Large times reduced modulo the progression step into (-step/2, step/2]."""
        step = self.progression_step
        shifted = np.mod(self.large_times + step / 2, step) - step / 2
        return np.asarray(shifted, dtype=np.float64)

    def clustered(self, tol: float | None = None) -> bool:
        """True if every large time lies within tol (default step/4) of the progression."""
        tol = self.progression_step / 4 if tol is None else tol
        return bool(np.all(np.abs(self.residues()) <= tol))

    def to_dict(self) -> dict[str, Any]:
        return {
            "N": self.N,
            "T": self.T,
            "interval_start": self.interval_start,
            "interval_len": self.interval_len,
            "progression_step": self.progression_step,
            "fattening_radius": self.fattening_radius,
            "large_count": int(self.large_times.size),
        }


@dataclass(frozen=True, eq=False)
class Witness:
    """An input b and the rows where |(Mb)_t| exceeds the threshold."""

    input: ComplexArray
    threshold: float
    achieved: tuple[int, ...]
    norm_l2: float
    norm_linf: float
    clipped: bool = False

    @classmethod
    def from_input(
        cls, matrix: ComplexMatrix, b: ArrayLike, threshold: float, clipped: bool = False
    ) -> "Witness":
        vec = np.array(b, dtype=np.complex128, copy=True)
        return cls(
            input=_frozen(vec),
            threshold=float(threshold),
            achieved=achieved_rows(matrix, vec, threshold),
            norm_l2=float(np.linalg.norm(vec)),
            norm_linf=float(np.max(np.abs(vec))),
            clipped=clipped,
        )

    @property
    def achieved_subset(self) -> RowSubset | None:
        return RowSubset(self.achieved) if self.achieved else None

    def to_dict(self) -> dict[str, Any]:
        return {
            "b": {"re": self.input.real.tolist(), "im": self.input.imag.tolist()},
            "lambda": self.threshold,
            "achieved": list(self.achieved),
            "norms": {"l2": self.norm_l2, "linf": self.norm_linf},
            "clipped": self.clipped,
        }


def achieved_rows(matrix: ComplexMatrix, b: ArrayLike, threshold: float) -> tuple[int, ...]:
    """1-based rows t with |(Mb)_t| > threshold."""
    values = np.abs(matrix.apply(b))
    return tuple(int(i) + 1 for i in np.flatnonzero(values > threshold))
