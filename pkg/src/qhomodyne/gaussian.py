"""Gaussian states as covariance matrices: validity, symplectic spectra,
von Neumann entropy.

Conventions (natural units, hbar = 1):

* An ``s``-mode state is described by the 2s x 2s second-moment matrix in
  (q, p) block order::

      alpha = [[alpha_qq, alpha_qp],
               [alpha_qp.T, alpha_pp]]

* The symplectic form is fixed to Delta = [[0, I], [-I, 0]].  The symplectic
  eigenvalues nu_j are the moduli of the eigenvalues of Delta^-1 @ alpha;
  a physical state satisfies nu_min >= 1/2.  For one mode this is the
  uncertainty relation alpha_qq * alpha_pp - alpha_qp**2 >= 1/4.

* Entropies are in nats unless a log base is given.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import mats
from .errors import DimensionMismatch, DomainError, InvalidState, PairingFailure

#: absolute slack on nu_min - 1/2 below which a state still counts as valid;
#: pure states sit exactly on the boundary and must pass.
VALIDITY_TOL = 1e-9

#: relative tolerance for the duplicate-pair structure of the B @ B.T spectrum.
PAIRING_TOL = 1e-8

__all__ = [
    "CovarianceMatrix",
    "MeanVector",
    "ValidityReport",
    "symplectic_form",
    "validate",
    "require_valid",
    "symplectic_eigenvalues",
    "g",
    "entropy",
    "VALIDITY_TOL",
]


@dataclass
class CovarianceMatrix:
    """Second-moment matrix of an s-mode state, stored as its three blocks.

    ``alpha_qq`` and ``alpha_pp`` must be symmetric; the full matrix uses
    ``alpha_pq = alpha_qp.T`` implicitly.  Construction checks shapes and
    symmetry only; quantum validity (nu_min >= 1/2) is checked by
    :func:`validate` / :func:`require_valid` so that invalid candidates can
    still be represented and diagnosed.
    """

    alpha_qq: np.ndarray
    alpha_qp: np.ndarray
    alpha_pp: np.ndarray

    def __post_init__(self):
        self.alpha_qq = mats.require_symmetric(np.atleast_2d(np.asarray(self.alpha_qq, dtype=float)))
        self.alpha_pp = mats.require_symmetric(np.atleast_2d(np.asarray(self.alpha_pp, dtype=float)))
        self.alpha_qp = np.atleast_2d(np.asarray(self.alpha_qp, dtype=float))
        s = self.alpha_qq.shape[0]
        for name, block in (("alpha_qp", self.alpha_qp), ("alpha_pp", self.alpha_pp)):
            if block.shape != (s, s):
                raise DimensionMismatch(
                    f"{name} has shape {block.shape}, expected {(s, s)}"
                )
        if not np.all(np.isfinite(self.alpha_qp)):
            raise ValueError("alpha_qp has non-finite entries")

    @property
    def s(self) -> int:
        return self.alpha_qq.shape[0]

    def full(self) -> np.ndarray:
        """Assemble the 2s x 2s block matrix."""
        return np.block([[self.alpha_qq, self.alpha_qp], [self.alpha_qp.T, self.alpha_pp]])

    @classmethod
    def one_mode(cls, a_qq: float, a_qp: float, a_pp: float) -> "CovarianceMatrix":
        return cls([[a_qq]], [[a_qp]], [[a_pp]])

    @classmethod
    def vacuum(cls, s: int = 1) -> "CovarianceMatrix":
        eye = 0.5 * np.eye(s)
        return cls(eye, np.zeros((s, s)), eye)

    @classmethod
    def direct_sum(cls, blocks: "list[CovarianceMatrix]") -> "CovarianceMatrix":
        """Stack independent modes into one covariance matrix."""
        qq = [b.alpha_qq for b in blocks]
        qp = [b.alpha_qp for b in blocks]
        pp = [b.alpha_pp for b in blocks]
        return cls(_block_diag(qq), _block_diag(qp), _block_diag(pp))

    def to_json(self) -> dict:
        """JSON object with row-major flat arrays, round-trippable bit-exactly."""
        return {
            "s": self.s,
            "alpha_qq": self.alpha_qq.ravel().tolist(),
            "alpha_qp": self.alpha_qp.ravel().tolist(),
            "alpha_pp": self.alpha_pp.ravel().tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CovarianceMatrix":
        s = int(obj["s"])
        def block(key):
            arr = np.asarray(obj[key], dtype=float)
            if arr.size != s * s:
                raise DimensionMismatch(f"{key} has {arr.size} entries, expected {s * s}")
            return arr.reshape(s, s)
        return cls(block("alpha_qq"), block("alpha_qp"), block("alpha_pp"))


@dataclass
class MeanVector:
    """First moments (m_q, m_p) of an s-mode state."""

    m_q: np.ndarray
    m_p: np.ndarray

    def __post_init__(self):
        self.m_q = np.atleast_1d(np.asarray(self.m_q, dtype=float))
        self.m_p = np.atleast_1d(np.asarray(self.m_p, dtype=float))
        if self.m_q.shape != self.m_p.shape or self.m_q.ndim != 1:
            raise DimensionMismatch("m_q and m_p must be vectors of equal length")
        if not (np.all(np.isfinite(self.m_q)) and np.all(np.isfinite(self.m_p))):
            raise ValueError("mean vector has non-finite entries")

    @property
    def s(self) -> int:
        return self.m_q.shape[0]

    @classmethod
    def zero(cls, s: int = 1) -> "MeanVector":
        return cls(np.zeros(s), np.zeros(s))

    def to_json(self) -> dict:
        return {"m_q": self.m_q.tolist(), "m_p": self.m_p.tolist()}


@dataclass
class ValidityReport:
    nu_min: float
    ok: bool
    nu: list[float] = field(default_factory=list)


def _block_diag(blocks: list[np.ndarray]) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n))
    k = 0
    for b in blocks:
        m = b.shape[0]
        out[k : k + m, k : k + m] = b
        k += m
    return out


def symplectic_form(s: int) -> np.ndarray:
    """Delta = [[0, I_s], [-I_s, 0]] in (q, p) ordering."""
    eye = np.eye(s)
    zero = np.zeros((s, s))
    return np.block([[zero, eye], [-eye, zero]])


def symplectic_eigenvalues(alpha: CovarianceMatrix) -> np.ndarray:
    """Symplectic spectrum nu_1 <= ... <= nu_s of a covariance matrix.

    Computed as the singular values of B = alpha^{1/2} Delta^-1 alpha^{1/2},
    i.e. the square roots of the (doubly degenerate) eigenvalues of B @ B.T.
    This keeps everything inside symmetric eigenproblems.  Requires the full
    matrix to be SPD; quantum validity is not assumed.
    """
    full = alpha.full()
    root = mats.sqrt_spd(full)
    delta_inv = -symplectic_form(alpha.s)  # Delta^2 = -I, so Delta^-1 = -Delta
    B = root @ delta_inv @ root
    w, _ = mats.sym_eig(B @ B.T)
    scale = max(w.max(), 1e-30)
    pairs = w.reshape(-1, 2)
    gap = np.abs(pairs[:, 0] - pairs[:, 1]).max()
    if gap > PAIRING_TOL * scale:
        raise PairingFailure(
            f"eigenvalues of B @ B.T do not pair within tolerance (gap {gap:.3e})"
        )
    return np.sqrt(np.clip(pairs.mean(axis=1), 0.0, None))


def validate(alpha: CovarianceMatrix) -> ValidityReport:
    """Check the state condition nu_min >= 1/2 - VALIDITY_TOL.

    Raises ``NotPositiveDefinite`` when the full matrix is not even SPD, so
    the report is only produced for candidates where nu is meaningful.
    """
    nu = symplectic_eigenvalues(alpha)
    nu_min = float(nu[0])
    return ValidityReport(nu_min=nu_min, ok=nu_min >= 0.5 - VALIDITY_TOL, nu=nu.tolist())


def require_valid(alpha: CovarianceMatrix) -> np.ndarray:
    """Return the symplectic spectrum, raising ``InvalidState`` for
    matrices that violate the uncertainty relation."""
    nu = symplectic_eigenvalues(alpha)
    if nu[0] < 0.5 - VALIDITY_TOL:
        raise InvalidState(
            f"uncertainty relation violated: nu_min = {nu[0]:.6g} < 0.5"
        )
    return nu


def g(x, base: float | None = None):
    """Entropy of a thermal mode with mean occupation x:
    g(x) = (x+1) log(x+1) - x log(x), with g(0) = 0.

    Natural log by default; pass ``base=2`` for bits.  Accepts scalars or
    arrays; raises ``DomainError`` for negative arguments.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise DomainError(f"g(x) requires x >= 0, got min {arr.min():.3e}")
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (arr + 1.0) * np.log1p(arr) - arr * np.log(arr)
    val = np.where(arr == 0.0, 0.0, val)
    if base is not None:
        val = val / math.log(base)
    return float(val) if np.isscalar(x) or arr.ndim == 0 else val


def entropy(alpha: CovarianceMatrix, base: float | None = None) -> float:
    """Von Neumann entropy of the Gaussian state with covariance ``alpha``:
    sum_j g(nu_j - 1/2).  Raises ``InvalidState`` for invalid covariances."""
    nu = require_valid(alpha)
    # pure states can land at nu = 1/2 - O(1e-16); clip the rounding noise
    occ = np.clip(nu - 0.5, 0.0, None)
    return float(np.sum(g(occ, base=base)))
