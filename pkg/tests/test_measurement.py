"""Posterior model and outcome law of the noisy position measurement."""

import json
import math

import numpy as np
import pytest

from conftest import (
    random_direct_sum,
    random_multimode,
    random_one_mode,
    random_pure_one_mode,
)
from qhomodyne import (
    CovarianceMatrix,
    MeanVector,
    NoiseMatrix,
    as_noise,
    outcome_distribution,
    posterior,
    posterior_mean,
    symplectic_eigenvalues,
)
from qhomodyne.errors import DimensionMismatch, NotPositiveDefinite


class TestNoiseMatrix:
    def test_isotropic(self):
        noise = NoiseMatrix.isotropic(2, 0.7)
        np.testing.assert_array_equal(noise.beta, 0.7 * np.eye(2))
        assert noise.s == 2

    def test_spd_enforced(self):
        with pytest.raises(NotPositiveDefinite):
            NoiseMatrix(np.array([[1.0, 2.0], [2.0, 1.0]]))
        with pytest.raises(NotPositiveDefinite):
            NoiseMatrix(np.zeros((1, 1)))

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError):
            NoiseMatrix(np.array([[1.0, 0.3], [0.1, 1.0]]))

    def test_json_roundtrip(self):
        noise = NoiseMatrix(np.array([[1.0, 0.2], [0.2, 2.0]]))
        back = NoiseMatrix.from_json(json.loads(json.dumps(noise.to_json())))
        assert np.array_equal(back.beta, noise.beta)


class TestAsNoise:
    def test_scalar(self):
        noise = as_noise(1.5, 3)
        np.testing.assert_array_equal(noise.beta, 1.5 * np.eye(3))

    def test_array(self):
        b = np.array([[1.0, 0.1], [0.1, 1.0]])
        np.testing.assert_array_equal(as_noise(b, 2).beta, b)

    def test_passthrough(self):
        noise = NoiseMatrix.isotropic(2, 1.0)
        assert as_noise(noise, 2) is noise

    def test_wrong_dimension(self):
        with pytest.raises(DimensionMismatch):
            as_noise(NoiseMatrix.isotropic(2, 1.0), 3)


class TestOutcomeDistribution:
    def test_scalar_sum_of_variances(self):
        dist = outcome_distribution(CovarianceMatrix.one_mode(1.0, 0.0, 1.0), 1.0)
        np.testing.assert_allclose(dist.covariance, [[2.0]])
        np.testing.assert_allclose(dist.mean, [0.0])

    def test_vacuum(self):
        dist = outcome_distribution(CovarianceMatrix.vacuum(), 1.0)
        np.testing.assert_allclose(dist.covariance, [[1.5]])
        # pdf at the origin of N(0, 1.5)
        assert dist.pdf(0.0) == pytest.approx(1.0 / math.sqrt(2 * math.pi * 1.5), rel=1e-12)

    def test_displaced_mean(self):
        mean = MeanVector(np.array([1.3]), np.array([-0.4]))
        dist = outcome_distribution(CovarianceMatrix.vacuum(), 0.5, mean=mean)
        np.testing.assert_allclose(dist.mean, [1.3])

    def test_block_diagonal_factorizes(self):
        rng = np.random.default_rng(20)
        a1, a2 = random_one_mode(rng), random_one_mode(rng)
        both = outcome_distribution(
            CovarianceMatrix.direct_sum([a1, a2]), as_noise(np.diag([0.5, 2.0]), 2)
        )
        d1 = outcome_distribution(a1, 0.5)
        d2 = outcome_distribution(a2, 2.0)
        np.testing.assert_allclose(
            both.covariance,
            np.diag([d1.covariance[0, 0], d2.covariance[0, 0]]),
            atol=1e-12,
        )
        x = np.array([0.3, -1.1])
        assert both.pdf(x) == pytest.approx(
            d1.pdf(x[:1]) * d2.pdf(x[1:]), rel=1e-10
        )


class TestPosterior:
    def test_thermal_example(self):
        model = posterior(CovarianceMatrix.one_mode(1.0, 0.0, 1.0), 1.0)
        np.testing.assert_allclose(model.alpha_hat.alpha_qq, [[0.5]], atol=1e-12)
        np.testing.assert_allclose(model.alpha_hat.alpha_pp, [[1.25]], atol=1e-12)
        np.testing.assert_allclose(model.alpha_hat.alpha_qp, [[0.0]], atol=1e-12)
        np.testing.assert_allclose(model.K_q, [[0.5]], atol=1e-12)
        np.testing.assert_allclose(model.K_p, [[0.0]], atol=1e-12)

    def test_correlated_gains(self):
        a, c, b, beta = 1.0, 0.5, 1.25, 2.0
        model = posterior(CovarianceMatrix.one_mode(a, c, b), beta)
        np.testing.assert_allclose(model.K_q, [[a / (a + beta)]], atol=1e-12)
        np.testing.assert_allclose(model.K_p, [[c / (a + beta)]], atol=1e-12)

    def test_purity_preserved(self):
        rng = np.random.default_rng(21)
        for _ in range(10):
            alpha = random_pure_one_mode(rng)
            beta = float(rng.uniform(0.1, 5.0))
            nu_hat = symplectic_eigenvalues(posterior(alpha, beta).alpha_hat)
            np.testing.assert_allclose(nu_hat, [0.5], atol=1e-8)

    def test_weak_measurement_limit(self):
        alpha = CovarianceMatrix.one_mode(1.0, 0.0, 1.0)
        model = posterior(alpha, 1e6)
        np.testing.assert_allclose(
            model.alpha_hat.full(), alpha.full(), rtol=1e-5
        )

    def test_q_variance_never_grows(self):
        rng = np.random.default_rng(22)
        for _ in range(10):
            alpha = random_multimode(rng, 2)
            model = posterior(alpha, float(rng.uniform(0.2, 3.0)))
            gap = np.linalg.eigvalsh(alpha.alpha_qq - model.alpha_hat.alpha_qq)
            assert gap.min() >= -1e-10

    def test_total_variance_decomposition(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            alpha = random_multimode(rng, 2)
            beta = float(rng.uniform(0.2, 3.0))
            model = posterior(alpha, beta)
            outc = alpha.alpha_qq + beta * np.eye(2)
            recon = model.alpha_hat.alpha_qq + model.K_q @ outc @ model.K_q.T
            np.testing.assert_allclose(recon, alpha.alpha_qq, atol=1e-10)

    def test_block_diagonal_decouples(self):
        rng = np.random.default_rng(24)
        a1, a2 = random_one_mode(rng), random_one_mode(rng)
        m12 = posterior(
            CovarianceMatrix.direct_sum([a1, a2]), as_noise(np.diag([0.5, 2.0]), 2)
        )
        m1, m2 = posterior(a1, 0.5), posterior(a2, 2.0)
        np.testing.assert_allclose(
            m12.alpha_hat.full(),
            CovarianceMatrix.direct_sum([m1.alpha_hat, m2.alpha_hat]).full(),
            atol=1e-12,
        )
        np.testing.assert_allclose(
            m12.K_q, np.diag([m1.K_q[0, 0], m2.K_q[0, 0]]), atol=1e-12
        )

    def test_multimode_posterior_validates(self):
        rng = np.random.default_rng(25)
        alpha = random_direct_sum(rng, 3)
        model = posterior(alpha, 1.0)
        nu_hat = symplectic_eigenvalues(model.alpha_hat)
        assert nu_hat.min() >= 0.5 - 1e-9

    def test_json_roundtrip(self):
        model = posterior(CovarianceMatrix.one_mode(1.0, 0.3, 1.2), 0.8)
        back = type(model).from_json(json.loads(json.dumps(model.to_json())))
        assert np.array_equal(back.K_q, model.K_q)
        assert np.array_equal(back.K_p, model.K_p)
        assert np.array_equal(back.alpha_hat.alpha_pp, model.alpha_hat.alpha_pp)


class TestPosteriorMean:
    def test_zero_outcome(self):
        model = posterior(CovarianceMatrix.one_mode(1.0, 0.3, 1.2), 1.0)
        mean = posterior_mean(model, np.array([0.0]))
        np.testing.assert_array_equal(mean.m_q, [0.0])
        np.testing.assert_array_equal(mean.m_p, [0.0])

    def test_thermal_gain(self):
        model = posterior(CovarianceMatrix.one_mode(1.0, 0.0, 1.0), 1.0)
        mean = posterior_mean(model, np.array([2.0]))
        np.testing.assert_allclose(mean.m_q, [1.0], atol=1e-12)
        np.testing.assert_allclose(mean.m_p, [0.0], atol=1e-12)

    def test_correlation_moves_momentum(self):
        a, c, beta = 1.0, 0.5, 1.0
        model = posterior(CovarianceMatrix.one_mode(a, c, 1.25), beta)
        mean = posterior_mean(model, np.array([1.0]))
        assert mean.m_p[0] == pytest.approx(c / (a + beta), abs=1e-12)
        assert mean.m_p[0] != 0.0
