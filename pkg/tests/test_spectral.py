"""Haar unitaries and the tensor-sum norm estimator."""

import math

import numpy as np
import pytest
import scipy.stats

from leinert import (
    NormEstimate,
    SpectralConfig,
    TensorOperands,
    apply_T,
    estimate_z_inverse,
    free_limit,
    haar_unitary,
    rng,
    two_norm,
)
from leinert.spectral import spectral_summary


def haar_tuple(count, N, gen):
    return tuple(haar_unitary(N, gen) for _ in range(count))


class TestHaar:
    def test_unitarity(self):
        gen = rng.philox(0, 1)
        for N in (2, 7, 40):
            u = haar_unitary(N, gen)
            assert np.allclose(u @ u.conj().T, np.eye(N), atol=1e-12)

    def test_determinism(self):
        a = haar_unitary(9, rng.philox(3, 4))
        b = haar_unitary(9, rng.philox(3, 4))
        assert (a == b).all()

    def test_eigenvalue_arguments_uniform(self):
        # the Haar spectral measure on the circle is uniform; pooled
        # eigenvalue phases should pass a KS test at a fixed seed
        gen = rng.philox(0, 99)
        phases = []
        for _ in range(30):
            eigs = np.linalg.eigvals(haar_unitary(30, gen))
            phases.extend(np.angle(eigs))
        stat = scipy.stats.kstest(
            phases, scipy.stats.uniform(loc=-math.pi, scale=2 * math.pi).cdf
        )
        assert stat.pvalue > 0.01

    def test_phase_fix_changes_raw_qr(self):
        # without the diagonal phase correction qr output is biased;
        # the corrected matrix still satisfies unitarity but differs
        gen = rng.philox(5, 6)
        ginibre = rng.standard_complex_normal(gen, (12, 12))
        q, _ = np.linalg.qr(ginibre)
        u = haar_unitary(12, rng.philox(5, 6))
        assert not np.allclose(u, q)


class TestApplyT:
    def test_matches_dense_kronecker(self):
        N, s, a = 6, 2, 0.7
        gen = rng.philox(1, 2)
        left = haar_tuple(s, N, gen)
        right = haar_tuple(s, N, gen)
        operands = TensorOperands(a, left, right)
        eye = np.eye(N)
        dense = a * sum(
            np.kron(u, eye) + np.kron(eye, v) for u, v in zip(left, right)
        )
        v = rng.standard_complex_normal(gen, N * N)
        assert np.allclose(apply_T(v, operands), dense @ v, atol=1e-12)

    def test_shape_guard(self):
        operands = TensorOperands(1.0, haar_tuple(1, 3, rng.philox(0, 0)),
                                  haar_tuple(1, 3, rng.philox(0, 1)))
        with pytest.raises(ValueError):
            apply_T(np.zeros(5, dtype=complex), operands)

    def test_mismatched_operands_rejected(self):
        gen = rng.philox(2, 2)
        with pytest.raises(ValueError):
            TensorOperands(1.0, haar_tuple(2, 4, gen), haar_tuple(1, 4, gen))


class TestTwoNorm:
    def test_identity_control(self):
        # U = V = I makes T = 2a * identity, norm exactly 2a
        eye = (np.eye(8, dtype=complex),)
        operands = TensorOperands(0.5, eye, eye)
        norm, _, converged = two_norm(operands, tol=1e-12)
        assert converged
        assert norm == pytest.approx(1.0, rel=1e-12)

    def test_against_dense_svd(self):
        N, s = 5, 2
        gen = rng.philox(7, 8)
        left = haar_tuple(s, N, gen)
        right = haar_tuple(s, N, gen)
        operands = TensorOperands(1.0, left, right)
        eye = np.eye(N)
        dense = sum(np.kron(u, eye) + np.kron(eye, v) for u, v in zip(left, right))
        exact = float(np.linalg.svd(dense, compute_uv=False)[0])
        norm, _, converged = two_norm(operands, tol=1e-10, gen=rng.philox(7, 9))
        assert converged
        assert norm == pytest.approx(exact, rel=1e-5)

    def test_norm_below_triangle_ceiling(self):
        gen = rng.philox(4, 4)
        operands = TensorOperands(
            1.0, haar_tuple(2, 20, gen), haar_tuple(2, 20, gen)
        )
        norm, _, _ = two_norm(operands, gen=rng.philox(4, 5))
        assert norm <= 4.0 * (1 + 1e-9)


class TestEstimate:
    def test_deterministic(self):
        config = SpectralConfig(s=2, N=15, trials=3, seed=11)
        a = estimate_z_inverse(config)
        b = estimate_z_inverse(config)
        assert a.norms == b.norms

    def test_seed_matters(self):
        a = estimate_z_inverse(SpectralConfig(s=2, N=15, trials=2, seed=1))
        b = estimate_z_inverse(SpectralConfig(s=2, N=15, trials=2, seed=2))
        assert a.norms != b.norms

    def test_trials_are_independent_draws(self):
        est = estimate_z_inverse(SpectralConfig(s=2, N=15, trials=3, seed=0))
        assert len(set(est.norms)) == 3

    def test_stats(self):
        est = estimate_z_inverse(SpectralConfig(s=2, N=12, trials=4, seed=5))
        assert isinstance(est, NormEstimate)
        assert est.mean == pytest.approx(sum(est.norms) / 4)
        assert est.std >= 0
        single = estimate_z_inverse(SpectralConfig(s=2, N=12, trials=1, seed=5))
        assert single.std == 0.0

    def test_single_factor_hits_free_limit_fast(self):
        # s=1: U (x) I + I (x) V has norm 2 for Haar U, V at modest N
        est = estimate_z_inverse(SpectralConfig(s=1, N=40, trials=2, seed=0))
        assert est.mean == pytest.approx(2.0, rel=0.02)
        assert free_limit(1) == 2.0

    def test_free_limit_values(self):
        assert free_limit(2) == pytest.approx(2 * math.sqrt(3))
        assert free_limit(2, 0.25) == pytest.approx(math.sqrt(3) / 2)

    def test_summary_fields(self):
        est = estimate_z_inverse(SpectralConfig(s=2, N=10, trials=2, seed=3))
        summary = spectral_summary(est)
        assert summary["s"] == 2 and summary["N"] == 10
        assert summary["free_limit"] == pytest.approx(2 * math.sqrt(3))
        assert summary["all_converged"] is True

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SpectralConfig(s=0, N=10)
        with pytest.raises(ValueError):
            SpectralConfig(s=1, N=1)
