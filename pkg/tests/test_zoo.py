"""Tests for the matrix zoo and the explicit constructions."""

import math

import numpy as np
import pytest

from lvlab.errors import (
    BudgetExceeded,
    DegenerateSize,
    IntervalOutOfRange,
    InvalidParameter,
    NoSquares,
    Unsupported,
)
from lvlab.linalg import spectral_norm_sq
from lvlab.models import FrequencySet, RowSubset
from lvlab.zoo import (
    gen_ac,
    gen_almost_counterexample,
    gen_dirichlet,
    gen_fat_ap,
    gen_freqset,
    gen_periodic_schrodinger,
    gen_planted,
    gen_random,
    haar_orthogonal,
)


class TestExponentialSums:
    """Tests for M_Phi, M_Dir and M_AC."""

    def test_dirichlet_entries(self):
        """Entry (t, n) is n^{it}."""
        M = gen_dirichlet(4, 3)
        assert M.shape == (3, 4)
        assert M.data[1, 2] == pytest.approx(7 ** 2j)
        assert M.kind == "dirichlet"

    def test_dirichlet_is_freqset(self):
        """M_Dir coincides with M_Phi for Phi = {ln n : N < n <= 2N}."""
        expected = gen_freqset(FrequencySet.dirichlet(32), 50)
        actual = gen_dirichlet(32, 50)
        assert np.max(np.abs(actual.data - expected.data)) <= 1e-12

    def test_ac_entries(self):
        """Entry (t, n) is e^{it sqrt(n/N)}."""
        M = gen_ac(4, 2)
        assert M.data[1, 0] == pytest.approx(np.exp(2j * math.sqrt(5 / 4)))

    def test_unit_modulus(self):
        M = gen_dirichlet(8, 16)
        assert np.allclose(np.abs(M.data), 1.0)

    def test_dft_columns_orthogonal(self):
        """The DFT frequency set gives orthogonal columns of norm sqrt(T)."""
        M = gen_freqset(FrequencySet.dft(8), 8)
        G = M.data.conj().T @ M.data
        assert np.allclose(G, 8 * np.eye(8), atol=1e-9)

    def test_rejects_small_degree(self):
        with pytest.raises(InvalidParameter):
            gen_dirichlet(1, 4)

    def test_rejects_empty_time_range(self):
        with pytest.raises(InvalidParameter):
            gen_ac(4, 0)


class TestPeriodicSchrodinger:
    """Tests for the d = 2 periodic Schrodinger matrix."""

    def test_shape(self):
        M = gen_periodic_schrodinger(3)
        assert M.shape == ((2 * 3 + 1) * 9, 7)

    def test_columns_orthogonal(self):
        """The 2N+1 point x grid separates every pair of columns."""
        M = gen_periodic_schrodinger(4)
        G = M.data.conj().T @ M.data
        assert np.allclose(G, M.T * np.eye(M.N), atol=1e-8)

    def test_other_dimensions_unsupported(self):
        with pytest.raises(Unsupported):
            gen_periodic_schrodinger(3, d=3)

    def test_cap(self):
        with pytest.raises(InvalidParameter):
            gen_periodic_schrodinger(33)


class TestRandomEnsembles:
    """Tests for i.i.d. random matrices."""

    @pytest.mark.parametrize("dist", ["unit-complex", "pm1", "gaussian"])
    def test_bit_reproducible(self, dist: str):
        first = gen_random(6, 4, dist, seed=11)
        second = gen_random(6, 4, dist, seed=11)
        assert np.array_equal(first.data, second.data)

    def test_seeds_differ(self):
        assert not np.array_equal(gen_random(6, 4, seed=1).data, gen_random(6, 4, seed=2).data)

    def test_pm1_values(self):
        M = gen_random(20, 10, "pm1", seed=3)
        assert set(np.unique(M.data.real)) <= {-1.0, 1.0}
        assert M.is_real()

    def test_unknown_distribution(self):
        with pytest.raises(InvalidParameter):
            gen_random(4, 4, "cauchy")

    def test_haar_orthogonal(self, rng: np.random.Generator):
        O = haar_orthogonal(6, rng)
        assert np.allclose(O @ O.T, np.eye(6), atol=1e-12)


class TestPlanted:
    """Tests for the planted sparse-vector model."""

    def test_sizes(self):
        instance = gen_planted(64, 1.5, 0.85, 0.01, seed=0)
        assert instance.matrix.shape == (512, 64)
        assert len(instance.support) == round(64 ** (1.5 + 1 - 1.7 - 0.01))

    def test_witness_identity(self):
        """M v = sqrt(N) w for the stored input witness."""
        for seed in range(100):
            instance = gen_planted(64, 1.5, 0.85, 0.01, seed=seed)
            lhs = instance.matrix.apply(instance.input_witness)
            rhs = math.sqrt(64) * instance.sparse_vector
            assert np.linalg.norm(lhs - rhs) <= 1e-9 * np.linalg.norm(rhs)

    def test_sparse_vector_support(self):
        instance = gen_planted(32, 1.5, 0.8, 0.01, seed=5)
        outside = np.setdiff1d(np.arange(instance.matrix.T), instance.support.zero_based())
        assert np.all(instance.sparse_vector[outside] == 0.0)

    def test_reproducible(self):
        first = gen_planted(32, 1.5, 0.8, 0.01, seed=9)
        second = gen_planted(32, 1.5, 0.8, 0.01, seed=9)
        assert np.array_equal(first.matrix.data, second.matrix.data)
        assert first.support == second.support

    def test_degenerate_support(self):
        """A large epsilon leaves S < 1."""
        with pytest.raises(DegenerateSize):
            gen_planted(4, 1.05, 0.99, 0.9)

    def test_rejects_alpha(self):
        with pytest.raises(InvalidParameter):
            gen_planted(16, 2.5, 0.8, 0.01)

    def test_variance_scale_is_smaller(self):
        std = gen_planted(64, 1.5, 0.85, 0.01, seed=3, w_scale="std")
        var = gen_planted(64, 1.5, 0.85, 0.01, seed=3, w_scale="variance")
        assert np.linalg.norm(var.sparse_vector) < np.linalg.norm(std.sparse_vector)


class TestAlmostCounterexample:
    """Tests for the square-supported construction."""

    def test_exact_heights_at_witnesses(self):
        """|D~(t)| = N^{1/4} L at every multiple of the period."""
        instance = gen_almost_counterexample(100, 1000)
        assert instance.witness_times.size == 16
        assert instance.progression_len == 4
        values = np.abs(instance.evaluate(instance.witness_times))
        expected = 100**0.25 * 4
        assert np.allclose(values, expected, rtol=1e-9)
        assert np.allclose(instance.guarantee, expected, rtol=1e-12)

    def test_budget(self):
        instance = gen_almost_counterexample(100, 1000)
        assert instance.budget_used() <= 100 + 1e-9

    def test_coefficients_on_squares(self):
        instance = gen_almost_counterexample(100, 1000)
        support = np.nonzero(instance.coeffs)[0] + 101
        assert all(math.isqrt(int(n)) ** 2 == n for n in support)

    def test_below_sharp_sigma_fattens(self):
        """Below 3/4 every point of the fattened peak is a witness."""
        instance = gen_almost_counterexample(400, 2000, sigma=0.6)
        assert instance.budget_used() == pytest.approx(400, rel=1e-9)
        values = np.abs(instance.evaluate(instance.witness_times))
        assert np.allclose(values, instance.guarantee, rtol=1e-8)
        assert instance.witness_times.size > math.floor(2000 / instance.period) + 1

    def test_integer_times(self):
        instance = gen_almost_counterexample(100, 1000, integer_times=True)
        assert np.all(instance.witness_times == np.rint(instance.witness_times))

    def test_no_squares(self):
        with pytest.raises(NoSquares):
            gen_almost_counterexample(4, 10)

    def test_rejects_sigma(self):
        with pytest.raises(InvalidParameter):
            gen_almost_counterexample(100, 1000, sigma=0.9)


class TestFatAP:
    """Tests for the short-interval Dirichlet construction."""

    def test_large_values_cluster(self):
        instance = gen_fat_ap(256, 1024, 256)
        assert instance.interval_len == 8
        assert instance.large_times.size > 0
        assert instance.clustered()

    def test_scan_starts_at_peak(self):
        instance = gen_fat_ap(256, 1024, 256)
        assert instance.scan_values[0] == pytest.approx(instance.interval_len)

    def test_interval_out_of_range(self):
        with pytest.raises(IntervalOutOfRange):
            gen_fat_ap(256, 1024, 510)

    def test_critical_length_too_short(self):
        with pytest.raises(InvalidParameter):
            gen_fat_ap(16, 1024, 16)

    def test_scan_budget(self):
        with pytest.raises(BudgetExceeded):
            gen_fat_ap(256, 1024, 256, step=1e-5)


class TestRowSubset:
    """Tests for row subsets used across the zoo."""

    def test_rows(self):
        M = gen_dirichlet(4, 6)
        sub = M.rows(RowSubset((2, 5)))
        assert sub.shape == (2, 4)
        assert np.array_equal(sub.data[1], M.data[4])

    def test_rejects_unsorted(self):
        with pytest.raises(InvalidParameter):
            RowSubset((3, 1))

    def test_minor_norm_at_most_full(self):
        M = gen_ac(6, 12)
        assert spectral_norm_sq(M.rows(RowSubset((1, 2, 3)))) <= spectral_norm_sq(M) + 1e-9
