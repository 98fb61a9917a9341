"""Entropy reduction of the noisy position measurement.

Over all states with a fixed covariance matrix alpha, the entropy reduction
is maximized by the Gaussian state, where it reduces to the entropy
difference between the prior and the (outcome-independent) posterior::

    ER(alpha, beta) = H(alpha) - H(alpha_hat)

For one mode this has the closed form ``er_one_mode``; the noiseless limit
(exact position readout) gives ER = H(alpha), implemented by ``er_exact``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidState
from .gaussian import CovarianceMatrix, entropy, g
from .measurement import PosteriorModel, posterior

__all__ = ["ERResult", "entropy_reduction", "er_one_mode", "er_exact"]


@dataclass
class ERResult:
    value: float
    prior_entropy: float
    posterior_entropy: float
    posterior: PosteriorModel

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "prior_entropy": self.prior_entropy,
            "posterior_entropy": self.posterior_entropy,
            "posterior": self.posterior.to_json(),
        }


def entropy_reduction(alpha: CovarianceMatrix, beta) -> ERResult:
    """ER as prior minus posterior entropy, for valid alpha and SPD beta."""
    model = posterior(alpha, beta)
    h_prior = entropy(alpha)
    h_post = entropy(model.alpha_hat)
    value = h_prior - h_post
    if value < -1e-10:
        raise InvalidState(f"entropy reduction came out negative: {value:.3e}")
    return ERResult(
        value=value,
        prior_entropy=h_prior,
        posterior_entropy=h_post,
        posterior=model,
    )


def er_one_mode(alpha_qq: float, alpha_qp: float, alpha_pp: float, beta: float) -> float:
    """One-mode closed form:

        g(sqrt(a_qq a_pp - a_qp^2) - 1/2)
          - g(sqrt((a_qq (beta a_pp + 1/4) - beta a_qp^2) / (a_qq + beta)) - 1/2)
    """
    if beta <= 0:
        raise DomainError(f"beta must be positive, got {beta}; use er_exact for beta = 0")
    disc = alpha_qq * alpha_pp - alpha_qp**2
    if alpha_qq <= 0 or disc < 0.25 - 1e-9:
        raise InvalidState(
            f"uncertainty relation violated: nu_min = {np.sqrt(max(disc, 0.0)):.6g} < 0.5"
        )
    nu = np.sqrt(disc)
    hat_disc = (alpha_qq * (beta * alpha_pp + 0.25) - beta * alpha_qp**2) / (alpha_qq + beta)
    nu_hat = np.sqrt(hat_disc)
    return g(max(nu - 0.5, 0.0)) - g(max(nu_hat - 0.5, 0.0))


def er_exact(alpha: CovarianceMatrix) -> float:
    """ER of the exact (noiseless) position measurement: the prior entropy.

    The beta -> 0 limit of ``entropy_reduction``; here extended to any mode
    count by mode additivity.
    """
    return entropy(alpha)
