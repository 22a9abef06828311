"""Tests for sparse singular value oracles and explicit witnesses."""

import itertools
import math

import numpy as np
import pytest

from lvlab.errors import CapExceeded, InvalidParameter
from lvlab.models import ComplexMatrix, RowSubset
from lvlab.oracle import ssv_eta, ssv_exact, ssv_search, witness_focusing, witness_random
from lvlab.zoo import gen_dirichlet, gen_random


def _brute_force(M: ComplexMatrix, S: int) -> float:
    return max(
        np.linalg.svd(M.data[list(rows)], compute_uv=False)[0]
        for rows in itertools.combinations(range(M.T), S)
    )


class TestSSVExact:
    """Tests for exhaustive enumeration."""

    @pytest.mark.parametrize("S", [1, 2, 3, 5])
    def test_matches_brute_force(self, small_unit_complex: ComplexMatrix, S: int):
        value, subset = ssv_exact(small_unit_complex, S)
        assert value == pytest.approx(_brute_force(small_unit_complex, S), rel=1e-10)
        assert len(subset) == S
        top = np.linalg.svd(small_unit_complex.rows(subset).data, compute_uv=False)[0]
        assert top == pytest.approx(value, rel=1e-10)

    def test_full_rows_is_operator_norm(self, small_gaussian: ComplexMatrix):
        value, subset = ssv_exact(small_gaussian, 8)
        assert value == pytest.approx(np.linalg.svd(small_gaussian.data, compute_uv=False)[0])
        assert subset == RowSubset(tuple(range(1, 9)))

    def test_ties_pick_smallest_subset(self, identity_matrix: ComplexMatrix):
        value, subset = ssv_exact(identity_matrix, 2)
        assert value == pytest.approx(1.0)
        assert subset == RowSubset((1, 2))

    def test_monotone_in_size(self):
        M = gen_dirichlet(4, 9)
        values = [ssv_exact(M, S)[0] for S in range(1, 10)]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:], strict=False))

    def test_unit_rows(self):
        """A single unit-modulus row has norm sqrt(N)."""
        value, _ = ssv_exact(gen_dirichlet(6, 5), 1)
        assert value == pytest.approx(math.sqrt(6))

    def test_threads_do_not_change_result(self):
        """Several enumeration chunks give the same answer on any pool size."""
        M = gen_random(22, 3, "unit-complex", seed=8)
        assert ssv_exact(M, 6, threads=1) == ssv_exact(M, 6, threads=3)

    def test_cap(self):
        M = gen_random(60, 2, seed=0)
        with pytest.raises(CapExceeded):
            ssv_exact(M, 30)

    def test_rejects_size(self, small_gaussian: ComplexMatrix):
        with pytest.raises(InvalidParameter):
            ssv_exact(small_gaussian, 0)
        with pytest.raises(InvalidParameter):
            ssv_exact(small_gaussian, 9)


class TestSSVSearch:
    """Tests for the swap local search."""

    def test_lower_bound(self, small_unit_complex: ComplexMatrix):
        exact, _ = ssv_exact(small_unit_complex, 4)
        found, subset = ssv_search(small_unit_complex, 4, seed=1, iters=500)
        assert found <= exact * (1 + 1e-12)
        assert len(subset) == 4

    def test_finds_optimum_on_small_input(self, small_unit_complex: ComplexMatrix):
        exact, _ = ssv_exact(small_unit_complex, 3)
        found, _ = ssv_search(small_unit_complex, 3, seed=0, iters=3000)
        assert found == pytest.approx(exact, rel=1e-10)

    @pytest.mark.slow
    def test_agrees_with_enumeration(self):
        """On 16 x 8 inputs the search reaches the optimum in most trials."""
        hits = 0
        for seed in range(50):
            M = gen_random(16, 8, "unit-complex", seed=seed)
            exact, _ = ssv_exact(M, 4)
            found, _ = ssv_search(M, 4, seed=seed, iters=2000)
            assert found <= exact * (1 + 1e-12)
            hits += found == pytest.approx(exact, rel=1e-10)
        assert hits >= 40

    def test_reproducible(self, small_gaussian: ComplexMatrix):
        assert ssv_search(small_gaussian, 3, seed=4) == ssv_search(small_gaussian, 3, seed=4)

    def test_rejects_iters(self, small_gaussian: ComplexMatrix):
        with pytest.raises(InvalidParameter):
            ssv_search(small_gaussian, 3, iters=0)


class TestSSVEta:
    """Tests for the fractional-size sparse singular value."""

    def test_uses_floor(self, small_gaussian: ComplexMatrix):
        assert ssv_eta(small_gaussian, 0.5) == ssv_exact(small_gaussian, 4)

    def test_rejects_eta(self, small_gaussian: ComplexMatrix):
        with pytest.raises(InvalidParameter):
            ssv_eta(small_gaussian, 1.5)
        with pytest.raises(InvalidParameter):
            ssv_eta(small_gaussian, 0.05)


class TestWitnesses:
    """Tests for explicit large value witnesses."""

    def test_focusing_single_row(self):
        """b = conj(M_t) gives (Mb)_t = N."""
        M = gen_dirichlet(16, 40)
        witness = witness_focusing(M, RowSubset((7,)), lam=8.0)
        assert 7 in witness.achieved
        assert abs(M.apply(witness.input)[6]) == pytest.approx(16.0)
        assert not witness.clipped
        assert witness.norm_linf == pytest.approx(1.0)

    def test_focusing_clips(self):
        M = ComplexMatrix(np.ones((4, 2)))
        witness = witness_focusing(M, RowSubset((1, 2, 3, 4)), lam=1.0)
        assert witness.clipped
        assert witness.norm_linf == pytest.approx(1.0)
        assert witness.achieved == (1, 2, 3, 4)

    def test_focusing_without_clip(self):
        M = ComplexMatrix(np.ones((4, 2)))
        witness = witness_focusing(M, RowSubset((1, 2, 3, 4)), lam=1.0, clip=False)
        assert witness.norm_linf == pytest.approx(2.0)

    def test_focusing_recovers_most_of_its_rows(self):
        """Focusing on 5 random rows of a 256 x 64 unit-complex matrix lights up at least 3."""
        N, T = 64, 256
        lam = 0.5 * N**0.8
        successes = 0
        for seed in range(50):
            M = gen_random(T, N, "unit-complex", seed=seed)
            rng = np.random.default_rng(seed)
            U = RowSubset.from_zero_based(rng.choice(T, size=5, replace=False))
            witness = witness_focusing(M, U, lam)
            assert witness.norm_linf <= 1.0 + 1e-12
            successes += len(set(witness.achieved) & set(U)) >= 3
        assert successes >= 45

    def test_random_anticoncentration(self):
        """For unit-complex M almost every row exceeds 0.1 sqrt(N)."""
        M = gen_random(128, 64, "unit-complex", seed=0)
        witness = witness_random(M, 0.1 * math.sqrt(64), seed=3)
        assert len(witness.achieved) >= 0.99 * 128
        assert witness.norm_linf == pytest.approx(1.0)

    def test_random_l2_budget(self, small_unit_complex: ComplexMatrix):
        witness = witness_random(small_unit_complex, 1.0, norm="l2", budget=2.0, iters=3)
        assert witness.norm_l2 == pytest.approx(2.0)

    def test_witness_record(self, small_unit_complex: ComplexMatrix):
        record = witness_random(small_unit_complex, 1.0, iters=2).to_dict()
        assert set(record) == {"b", "lambda", "achieved", "norms", "clipped"}

    def test_unknown_norm(self, small_gaussian: ComplexMatrix):
        with pytest.raises(InvalidParameter):
            witness_random(small_gaussian, 1.0, norm="l1")
