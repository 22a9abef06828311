"""Tests for the large value certifiers."""

import math

import numpy as np
import pytest

from lvlab.certifiers import (
    MMStarCertificate,
    OperatorNormCertificate,
    SchattenCertificate,
    cert_mmstar,
    cert_operator,
    cert_power,
    cert_schatten,
    certificate_from_dict,
    duplicated_index_vector,
    evaluate,
    flat_norm,
    flattening_operator,
    schatten_flattening,
    schatten_form,
    tensor_power,
)
from lvlab.errors import CapExceeded, InvalidParameter, Unsupported
from lvlab.linalg import gram, schatten_trace, spectral_norm_sq
from lvlab.models import ComplexMatrix, FrequencySet, RowSubset
from lvlab.oracle import ssv_exact, witness_focusing, witness_random
from lvlab.zoo import gen_ac, gen_dirichlet, gen_freqset, gen_random


@pytest.fixture
def dft16() -> ComplexMatrix:
    """16 x 16 DFT matrix (orthogonal columns of norm 4)."""
    return gen_freqset(FrequencySet.dft(16), 16, kind="dft")


class TestEvaluate:
    """Tests for the bisection shared by all certificates."""

    def test_operator_bound_on_dft(self, dft16: ComplexMatrix):
        """||M||^2 B^2 / lambda^2 = 16 * 16 / 100 = 2.56."""
        bound = evaluate(cert_operator(dft16), 10.0, 16.0)
        assert bound.max_w == 2
        assert bound.raw == pytest.approx(2.56)
        assert not bound.unbounded
        assert bound.binding_constraint == "operator norm"

    def test_clamped_to_rows(self):
        M = gen_random(6, 3, "unit-complex", seed=0)
        bound = evaluate(cert_operator(M), 0.01, 3.0)
        assert bound.max_w == 6
        assert bound.raw > 6

    def test_zero_when_one_row_fails(self, dft16: ComplexMatrix):
        bound = evaluate(cert_operator(dft16), 1000.0, 16.0)
        assert bound.max_w == 0

    def test_rejects_nonpositive_threshold(self, dft16: ComplexMatrix):
        with pytest.raises(InvalidParameter):
            evaluate(cert_operator(dft16), 0.0, 16.0)

    def test_to_dict(self):
        record = evaluate(cert_mmstar(ComplexMatrix(np.ones((4, 4)))), 1.0, 1.0).to_dict()
        assert record["unbounded"] is True
        assert record["raw"] is None


class TestOperatorCertificate:
    """Tests for the operator norm method."""

    def test_constant(self, small_gaussian: ComplexMatrix):
        cert = cert_operator(small_gaussian)
        expected = np.linalg.svd(small_gaussian.data, compute_uv=False)[0] ** 2
        assert cert.opnorm_sq == pytest.approx(expected, rel=1e-10)

    def test_minor_bound_constant(self):
        cert = OperatorNormCertificate(T=4, N=2, opnorm_sq=3.0)
        assert cert.minor_norm_sq_bound(1) == cert.minor_norm_sq_bound(4) == 3.0


class TestMMStarCertificate:
    """Tests for the Gershgorin Gram method."""

    def test_dft_constants(self, dft16: ComplexMatrix):
        cert = cert_mmstar(dft16)
        assert cert.diag_max == pytest.approx(16.0)
        assert cert.offdiag_max == pytest.approx(0.0, abs=1e-9)
        bound = evaluate(cert, 10.0, 16.0)
        assert bound.raw == pytest.approx(2.56, rel=1e-9)
        assert bound.binding_constraint == "Gram row sum"

    def test_unbounded_when_offdiag_too_large(self):
        """With c B^2 >= lambda^2 the certificate cannot rule anything out."""
        M = ComplexMatrix(np.ones((4, 4)))
        bound = evaluate(cert_mmstar(M), 1.0, 1.0)
        assert bound.unbounded
        assert bound.max_w == 4
        assert bound.binding_constraint == "off-diagonal Gram entries"

    def test_minor_bound_is_row_sum(self):
        cert = MMStarCertificate(T=10, N=4, diag_max=4.0, offdiag_max=0.5)
        assert cert.minor_norm_sq_bound(5) == pytest.approx(6.0)


class TestPowerCertificate:
    """Tests for the tensor power method and its diagonal correction."""

    def test_k1_rejected(self, small_gaussian: ComplexMatrix):
        with pytest.raises(InvalidParameter):
            cert_power(small_gaussian, k=1)

    def test_correction_requires_real(self, small_unit_complex: ComplexMatrix):
        with pytest.raises(Unsupported):
            cert_power(small_unit_complex, diag_corrected=True)

    def test_correction_requires_k2(self, small_gaussian: ComplexMatrix):
        with pytest.raises(Unsupported):
            cert_power(small_gaussian, k=3, diag_corrected=True)

    @pytest.mark.parametrize("k", [2, 3])
    def test_hadamard_path_matches_explicit(self, k: int):
        """lambda_max of the Hadamard power equals ||M^(x)k||^2."""
        M = gen_random(10, 4, "unit-complex", seed=6)
        fast = cert_power(M, k=k).tensor_opnorm_sq
        explicit = cert_power(M, k=k, explicit=True).tensor_opnorm_sq
        assert fast == pytest.approx(explicit, rel=1e-9)

    def test_tensor_power_entries(self):
        M = ComplexMatrix(np.array([[1.0, 2.0], [3.0, -1.0]]))
        P = tensor_power(M, 2).data
        assert P.shape == (2, 4)
        assert np.allclose(P[0], [1, 2, 2, 4])
        assert np.allclose(P[1], [9, -3, -3, 1])

    def test_tensor_power_cap(self):
        M = gen_random(2, 101, seed=0)
        with pytest.raises(CapExceeded):
            tensor_power(M, 3)

    def test_duplicated_index_witness(self):
        """||M^(x)2||^2 >= T N for pm1 M, attained direction from w_(j,j) = 1."""
        M = gen_random(64, 16, "pm1", seed=0)
        w = duplicated_index_vector(16)
        image = tensor_power(M, 2).apply(w)
        assert np.linalg.norm(image) / np.linalg.norm(w) == pytest.approx(math.sqrt(64 * 16))
        assert cert_power(M).tensor_opnorm_sq >= 64 * 16 * (1 - 1e-12)

    def test_diagonal_correction_improves(self):
        """The corrected bound beats the plain k = 2 bound in most seeds."""
        lam, b_sq = 16**0.7, 16.0
        wins = 0
        for seed in range(50):
            M = gen_random(64, 16, "pm1", seed=seed)
            plain = evaluate(cert_power(M), lam, b_sq)
            corrected = evaluate(cert_power(M, diag_corrected=True), lam, b_sq)
            assert corrected.raw <= plain.raw * (1 + 1e-12)
            wins += corrected.raw < plain.raw
        assert wins >= 40

    def test_corrected_constants(self):
        M = gen_random(64, 16, "pm1", seed=1)
        cert = cert_power(M, diag_corrected=True)
        assert cert.entry_sq_max == pytest.approx(1.0)
        assert cert.simple_bound == pytest.approx(8.0)
        assert 0 < cert.residual_norm ** 2 <= cert.tensor_opnorm_sq


class TestSchattenForm:
    """Tests for the multilinear Schatten form."""

    @pytest.mark.parametrize("dist", ["unit-complex", "gaussian"])
    @pytest.mark.parametrize("r", [1, 2, 3, 4])
    def test_trace_identity(self, dist: str, r: int):
        """S_r(1_W, ..., 1_W) = Trace[(M_W* M_W)^r]."""
        rng = np.random.default_rng(r)
        for seed in range(5):
            M = gen_random(12, 6, dist, seed=seed)
            for _ in range(10):
                size = int(rng.integers(1, 13))
                W = RowSubset.from_zero_based(rng.choice(12, size=size, replace=False))
                one = W.indicator(12)
                value = schatten_form(M, [one] * r)
                expected = schatten_trace(M.rows(W), r)
                assert value.real == pytest.approx(expected, rel=1e-9)
                assert abs(value.imag) <= 1e-9 * max(expected, 1.0)

    @pytest.mark.slow
    def test_trace_identity_sweep(self):
        """The identity holds across shapes up to 24 x 12 and orders 1 to 4."""
        rng = np.random.default_rng(99)
        dists = ("unit-complex", "pm1", "gaussian")
        for seed in range(50):
            T, N = int(rng.integers(2, 25)), int(rng.integers(1, 13))
            M = gen_random(T, N, dists[seed % 3], seed=seed)
            for _ in range(100):
                size = int(rng.integers(1, T + 1))
                W = RowSubset.from_zero_based(rng.choice(T, size=size, replace=False))
                r = int(rng.integers(1, 5))
                value = schatten_form(M, [W.indicator(T)] * r)
                expected = schatten_trace(M.rows(W), r)
                assert value.real == pytest.approx(expected, rel=1e-9)
                assert abs(value.imag) <= 1e-9 * max(expected, 1.0)

    def test_remainder_subtracts_diagonal(self, small_unit_complex: ComplexMatrix):
        e1 = np.zeros(10)
        e1[0] = 1.0
        assert abs(schatten_form(small_unit_complex, [e1] * 3, remainder=True)) < 1e-9

    def test_rejects_wrong_length(self, small_gaussian: ComplexMatrix):
        with pytest.raises(InvalidParameter):
            schatten_form(small_gaussian, [np.ones(3)])


class TestFlattening:
    """Tests for the dense and matrix-free flattenings."""

    @pytest.mark.parametrize("r", [2, 3, 4])
    def test_operator_matches_dense(self, r: int):
        M = gen_random(6, 3, "unit-complex", seed=r)
        dense = schatten_flattening(M, r)
        op = flattening_operator(gram(M).data, r)
        rng = np.random.default_rng(0)
        x = rng.standard_normal(dense.shape[1]) + 1j * rng.standard_normal(dense.shape[1])
        y = rng.standard_normal(dense.shape[0]) + 1j * rng.standard_normal(dense.shape[0])
        assert np.allclose(op.matvec(x), dense @ x, atol=1e-9)
        assert np.allclose(op.rmatvec(y), dense.conj().T @ y, atol=1e-9)

    @pytest.mark.parametrize("r", [3, 4])
    def test_power_matches_dense(self, r: int):
        M = gen_random(8, 4, "gaussian", seed=2)
        dense = flat_norm(M, r, method="dense")
        power = flat_norm(M, r, method="power")
        assert power == pytest.approx(dense, rel=1e-6)

    def test_bounds_remainder(self):
        """|remainder(v1, v2, v3)| <= F ||v1|| ||v2|| ||v3|| over many rank-one tuples."""
        M = gen_random(8, 4, "unit-complex", seed=3)
        F = flat_norm(M, 3)
        rng = np.random.default_rng(1)
        for _ in range(1000):
            vs = [rng.standard_normal(8) + 1j * rng.standard_normal(8) for _ in range(3)]
            value = abs(schatten_form(M, vs, remainder=True))
            assert value <= F * np.prod([np.linalg.norm(v) for v in vs]) * (1 + 1e-9)

    def test_unknown_order(self, small_gaussian: ComplexMatrix):
        with pytest.raises(InvalidParameter):
            flat_norm(small_gaussian, 5)

    def test_unknown_method(self, small_gaussian: ComplexMatrix):
        with pytest.raises(InvalidParameter):
            flat_norm(small_gaussian, 3, method="lanczos")

    def test_dense_cap(self):
        M = gen_random(200, 2, seed=0)
        with pytest.raises(CapExceeded):
            schatten_flattening(M, 3)


class TestSchattenCertificate:
    """Tests for Schatten certificate evaluation."""

    @pytest.mark.parametrize(("r", "expected"), [(2, 6), (3, 4)])
    def test_dft_bounds(self, dft16: ComplexMatrix, r: int, expected: int):
        """With F = 0 the bound is (B^2 N / lambda^2)^{r/(r-1)}."""
        bound = evaluate(cert_schatten(dft16, r=r), 10.0, 16.0)
        assert bound.max_w == expected
        assert bound.raw == pytest.approx(2.56 ** (r / (r - 1)), rel=1e-6)

    def test_closed_form_zero_remainder(self):
        cert = SchattenCertificate(T=100, N=16, r=3, diag_const=16.0, flat_norm=0.0)
        raw, label = cert.closed_form(10.0, 16.0)
        assert raw == pytest.approx(2.56**1.5)
        assert label == "Schatten diagonal term"

    def test_closed_form_root_solves_rule(self):
        cert = SchattenCertificate(T=1000, N=16, r=3, diag_const=16.0, flat_norm=5000.0)
        lam, b_sq = 10.0, 16.0
        w, _ = cert.closed_form(lam, b_sq)
        lhs = w**3 * lam**6
        rhs = b_sq**3 * (16.0**3 * w + 5000.0 * w**1.5)
        assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_max_w_consistent_with_raw(self):
        cert = SchattenCertificate(T=1000, N=16, r=4, diag_const=16.0, flat_norm=1e5)
        bound = evaluate(cert, 20.0, 16.0)
        assert bound.max_w <= bound.raw * (1 + 1e-9)
        assert bound.raw < bound.max_w + 1


class TestCertificateRecords:
    """Tests for certificate serialization."""

    @pytest.mark.parametrize("build", [
        cert_operator,
        cert_mmstar,
        lambda M: cert_power(M, diag_corrected=True),
        lambda M: cert_schatten(M, r=3),
    ])
    def test_round_trip(self, small_gaussian: ComplexMatrix, build):
        cert = build(small_gaussian)
        rebuilt = certificate_from_dict(cert.to_dict())
        assert rebuilt == cert
        assert evaluate(rebuilt, 2.0, 4.0) == evaluate(cert, 2.0, 4.0)

    def test_record_fields(self, small_gaussian: ComplexMatrix):
        record = cert_operator(small_gaussian).to_dict()
        assert record["schema_version"] == 1
        assert record["dims"] == [8, 4]
        assert record["method"] == "operator"

    def test_unknown_method(self):
        with pytest.raises(InvalidParameter):
            certificate_from_dict({"method": "magic", "schema_version": 1})

    def test_schema_version_checked(self, small_gaussian: ComplexMatrix):
        record = cert_operator(small_gaussian).to_dict()
        record["schema_version"] = 99
        with pytest.raises(InvalidParameter):
            certificate_from_dict(record)


def _soundness_cases(T: int, N: int, seeds: int) -> list[ComplexMatrix]:
    cases = [
        gen_random(T, N, dist, seed=seed)
        for dist in ("unit-complex", "pm1", "gaussian")
        for seed in range(seeds)
    ]
    return [*cases, gen_dirichlet(N, T), gen_ac(N, T)]


def _assert_sound(M: ComplexMatrix) -> None:
    certs = [cert_operator(M), cert_mmstar(M)]
    certs.extend(cert_schatten(M, r=r) for r in (2, 3, 4))
    certs.append(cert_power(M))
    if M.is_real():
        certs.append(cert_power(M, diag_corrected=True))
    for S in range(1, M.N + 1):
        exact_sq = ssv_exact(M, S)[0] ** 2
        for cert in certs:
            assert cert.minor_norm_sq_bound(S) >= exact_sq * (1 - 1e-9), (cert.method, S)


class TestSoundness:
    """Every internal minor bound dominates the exact sparse singular value."""

    def test_small_matrices(self):
        for M in _soundness_cases(10, 5, seeds=4):
            _assert_sound(M)

    @pytest.mark.slow
    def test_acceptance_grid(self):
        for M in _soundness_cases(20, 10, seeds=16):
            _assert_sound(M)

    def test_operator_tight_on_full_rows(self, small_gaussian: ComplexMatrix):
        assert cert_operator(small_gaussian).opnorm_sq == pytest.approx(
            spectral_norm_sq(small_gaussian)
        )


def _all_certificates(M: ComplexMatrix) -> list:
    certs = [cert_operator(M), cert_mmstar(M), cert_power(M)]
    return [*certs, *(cert_schatten(M, r=r) for r in (2, 3, 4))]


class TestWitnessSandwich:
    """Evaluated bounds never fall below what an explicit input achieves."""

    @pytest.mark.parametrize("seed", range(4))
    def test_focusing_and_random_witnesses(self, seed: int):
        M = gen_random(24, 8, "unit-complex", seed=seed)
        certs = _all_certificates(M)
        rng = np.random.default_rng(seed)
        for lam in (2.0, 4.0, 6.0):
            U = RowSubset.from_zero_based(rng.choice(24, size=4, replace=False))
            witnesses = [witness_focusing(M, U, lam), witness_random(M, lam, seed=seed)]
            for witness in witnesses:
                budget_sq = witness.norm_l2**2
                for cert in certs:
                    bound = evaluate(cert, lam, budget_sq)
                    assert bound.max_w >= len(witness.achieved), (cert.method, lam)

    def test_dirichlet_witness(self):
        M = gen_dirichlet(8, 30)
        witness = witness_focusing(M, RowSubset((3,)), lam=4.0)
        for cert in _all_certificates(M):
            assert evaluate(cert, 4.0, witness.norm_l2**2).max_w >= len(witness.achieved)


class TestBoundMonotonicity:
    """max_w shrinks as lambda grows and grows with the budget."""

    @pytest.mark.parametrize("dist", ["unit-complex", "gaussian"])
    def test_in_threshold_and_budget(self, dist: str):
        M = gen_random(20, 6, dist, seed=11)
        lambdas = [0.5, 1.0, 2.0, 3.0, 5.0, 8.0]
        budgets = [0.5, 1.0, 4.0, 6.0, 16.0]
        for cert in _all_certificates(M):
            by_lambda = [evaluate(cert, lam, 6.0).max_w for lam in lambdas]
            assert all(b <= a for a, b in zip(by_lambda, by_lambda[1:], strict=False))
            by_budget = [evaluate(cert, 3.0, b_sq).max_w for b_sq in budgets]
            assert all(b >= a for a, b in zip(by_budget, by_budget[1:], strict=False))


class TestTensorInequality:
    """sum_t |(Mv)_t|^4 <= ||M (x) M||^2 ||v||^4 for the stored tensor norm."""

    def test_random_inputs(self, rng: np.random.Generator):
        for _ in range(100):
            T, N = int(rng.integers(2, 16)), int(rng.integers(1, 8))
            M = ComplexMatrix(rng.standard_normal((T, N)) + 1j * rng.standard_normal((T, N)))
            v = rng.standard_normal(N) + 1j * rng.standard_normal(N)
            cert = cert_power(M)
            lhs = float(np.sum(np.abs(M.apply(v)) ** 4))
            rhs = cert.tensor_opnorm_sq * float(np.linalg.norm(v)) ** 4
            assert lhs <= rhs * (1 + 1e-9)
