"""Shared builders for randomized covariance matrices.

Valid one-mode covariances are parameterized by (a, c, nu) with
b = (nu^2 + c^2) / a, which makes the symplectic eigenvalue exactly nu
by construction -- no rejection sampling needed.
"""

import numpy as np

from qhomodyne import CovarianceMatrix


def random_one_mode(rng, nu_min=0.5, nu_max=3.0):
    """Random valid one-mode covariance with nu drawn from [nu_min, nu_max]."""
    a = float(np.exp(rng.uniform(-0.7, 0.7)))
    c = float(rng.uniform(-0.4, 0.4))
    nu = float(rng.uniform(nu_min, nu_max))
    b = (nu * nu + c * c) / a
    return CovarianceMatrix.one_mode(a, c, b)


def random_pure_one_mode(rng):
    """Random pure one-mode covariance (nu = 1/2 exactly)."""
    a = float(np.exp(rng.uniform(-0.7, 0.7)))
    c = float(rng.uniform(-0.4, 0.4))
    b = (0.25 + c * c) / a
    return CovarianceMatrix.one_mode(a, c, b)


def random_direct_sum(rng, s, nu_min=0.5, nu_max=3.0):
    """Direct sum of s independent random one-mode covariances."""
    return CovarianceMatrix.direct_sum(
        [random_one_mode(rng, nu_min, nu_max) for _ in range(s)]
    )


def random_orthogonal(rng, s):
    """Haar-ish s x s orthogonal matrix via QR with sign fixing."""
    m = rng.normal(size=(s, s))
    q, r = np.linalg.qr(m)
    return q * np.sign(np.diag(r))


def rotate_modes(alpha, o):
    """Conjugate by the symplectic-orthogonal O (+) O: q -> Oq, p -> Op.

    Preserves the symplectic spectrum, so validity and entropy are
    unchanged; with isotropic measurement noise the ER is too.
    """
    return CovarianceMatrix(
        o @ alpha.alpha_qq @ o.T,
        o @ alpha.alpha_qp @ o.T,
        o @ alpha.alpha_pp @ o.T,
    )


def random_multimode(rng, s, nu_min=0.5, nu_max=3.0):
    """Random valid s-mode covariance with coupled modes (rotated direct sum)."""
    o = random_orthogonal(rng, s)
    return rotate_modes(random_direct_sum(rng, s, nu_min, nu_max), o)
