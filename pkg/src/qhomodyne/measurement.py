"""Approximate position measurement of an s-mode Gaussian state.

The measurement smears each position outcome with Gaussian noise of SPD
covariance beta.  For a Gaussian input with covariance alpha the outcome
distribution is N(m_q, alpha_qq + beta), and the conditional (posterior)
state given outcome x is again Gaussian with an x-independent covariance::

    alpha_hat_qq = (alpha_qq^-1 + beta^-1)^-1
    alpha_hat_pp = alpha_pp - alpha_pq (alpha_qq + beta)^-1 alpha_qp + beta^-1 / 4
    alpha_hat_qp = (alpha_qq^-1 + beta^-1)^-1 alpha_qq^-1 alpha_qp

and mean displaced linearly in the outcome::

    m_hat_q = K_q x,   m_hat_p = K_p x
    K_q = alpha_qq (alpha_qq + beta)^-1,   K_p = alpha_pq (alpha_qq + beta)^-1

The noiseless limit beta -> 0 has no bounded measurement density and is
handled separately by the exact-measurement paths in :mod:`qhomodyne.er`
and :mod:`qhomodyne.capacity`; beta must be strictly SPD here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import mats
from .errors import DimensionMismatch, InvalidState
from .gaussian import CovarianceMatrix, MeanVector, require_valid

__all__ = [
    "NoiseMatrix",
    "PosteriorModel",
    "OutcomeDistribution",
    "as_noise",
    "outcome_distribution",
    "posterior",
    "posterior_mean",
]


@dataclass
class NoiseMatrix:
    """Measurement-noise covariance beta (s x s, strictly SPD)."""

    beta: np.ndarray

    def __post_init__(self):
        self.beta = mats.require_symmetric(np.atleast_2d(np.asarray(self.beta, dtype=float)))
        mats.cholesky(self.beta)  # SPD or bust

    @property
    def s(self) -> int:
        return self.beta.shape[0]

    @classmethod
    def isotropic(cls, s: int, b: float) -> "NoiseMatrix":
        return cls(b * np.eye(s))

    def to_json(self) -> dict:
        return {"s": self.s, "beta": self.beta.ravel().tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "NoiseMatrix":
        s = int(obj["s"])
        arr = np.asarray(obj["beta"], dtype=float)
        if arr.size != s * s:
            raise DimensionMismatch(f"beta has {arr.size} entries, expected {s * s}")
        return cls(arr.reshape(s, s))


def as_noise(beta, s: int) -> NoiseMatrix:
    """Coerce a scalar (b * I_s), array, or NoiseMatrix to a NoiseMatrix."""
    if isinstance(beta, NoiseMatrix):
        if beta.s != s:
            raise DimensionMismatch(f"noise is {beta.s}-mode, state is {s}-mode")
        return beta
    if np.isscalar(beta):
        return NoiseMatrix.isotropic(s, float(beta))
    arr = np.atleast_2d(np.asarray(beta, dtype=float))
    if arr.shape != (s, s):
        raise DimensionMismatch(f"noise has shape {arr.shape}, expected {(s, s)}")
    return NoiseMatrix(arr)


@dataclass
class PosteriorModel:
    """Posterior covariance plus the outcome-to-mean gain matrices."""

    alpha_hat: CovarianceMatrix
    K_q: np.ndarray
    K_p: np.ndarray

    def to_json(self) -> dict:
        return {
            "alpha_hat": self.alpha_hat.to_json(),
            "K_q": self.K_q.ravel().tolist(),
            "K_p": self.K_p.ravel().tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PosteriorModel":
        alpha_hat = CovarianceMatrix.from_json(obj["alpha_hat"])
        s = alpha_hat.s
        return cls(
            alpha_hat=alpha_hat,
            K_q=np.asarray(obj["K_q"], dtype=float).reshape(s, s),
            K_p=np.asarray(obj["K_p"], dtype=float).reshape(s, s),
        )


@dataclass
class OutcomeDistribution:
    """Gaussian outcome law of the measurement: N(mean, covariance)."""

    covariance: np.ndarray
    mean: np.ndarray

    def pdf(self, x) -> float:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        s = self.covariance.shape[0]
        if x.shape != (s,):
            raise DimensionMismatch(f"outcome has shape {x.shape}, expected {(s,)}")
        d = x - self.mean
        prec = mats.inverse_spd(self.covariance)
        det = np.prod(np.diag(mats.cholesky(self.covariance))) ** 2
        norm = ((2.0 * np.pi) ** s * det) ** -0.5
        return float(norm * np.exp(-0.5 * d @ prec @ d))


def outcome_distribution(
    alpha: CovarianceMatrix, beta, mean: MeanVector | None = None
) -> OutcomeDistribution:
    """Outcome law N(m_q, alpha_qq + beta) of measuring the state (alpha, mean)."""
    noise = as_noise(beta, alpha.s)
    if mean is None:
        mean = MeanVector.zero(alpha.s)
    if mean.s != alpha.s:
        raise DimensionMismatch(f"mean is {mean.s}-mode, state is {alpha.s}-mode")
    require_valid(alpha)
    return OutcomeDistribution(covariance=alpha.alpha_qq + noise.beta, mean=mean.m_q.copy())


def posterior(alpha: CovarianceMatrix, beta) -> PosteriorModel:
    """Posterior covariance and gain matrices for a valid alpha and SPD beta."""
    noise = as_noise(beta, alpha.s)
    require_valid(alpha)

    a_qq, a_qp, a_pp = alpha.alpha_qq, alpha.alpha_qp, alpha.alpha_pp
    a_pq = a_qp.T
    b = noise.beta

    qq_inv = mats.inverse_spd(a_qq)
    b_inv = mats.inverse_spd(b)
    sum_inv = mats.inverse_spd(a_qq + b)

    hat_qq = mats.inverse_spd(qq_inv + b_inv)
    if __debug__:
        # conditioning guard: the harmonic-mean form must agree with the
        # algebraically equivalent product form
        alt = a_qq @ sum_inv @ b
        assert np.allclose(hat_qq, alt, rtol=0.0, atol=1e-10 * max(1.0, np.abs(hat_qq).max())), \
            "posterior alpha_qq forms disagree beyond 1e-10"
    hat_pp = a_pp - a_pq @ sum_inv @ a_qp + 0.25 * b_inv
    hat_qp = hat_qq @ qq_inv @ a_qp

    K_q = a_qq @ sum_inv
    K_p = a_pq @ sum_inv

    alpha_hat = CovarianceMatrix(hat_qq, hat_qp, 0.5 * (hat_pp + hat_pp.T))
    nu_hat = require_valid(alpha_hat)  # InvalidState here would mean broken numerics
    if nu_hat[0] < 0.5 - 1e-9:
        raise InvalidState("posterior covariance failed the state condition")
    return PosteriorModel(alpha_hat=alpha_hat, K_q=K_q, K_p=K_p)


def posterior_mean(model: PosteriorModel, x) -> MeanVector:
    """Posterior first moments (K_q x, K_p x) for outcome vector x."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    s = model.alpha_hat.s
    if x.shape != (s,):
        raise DimensionMismatch(f"outcome has shape {x.shape}, expected {(s,)}")
    return MeanVector(model.K_q @ x, model.K_p @ x)
