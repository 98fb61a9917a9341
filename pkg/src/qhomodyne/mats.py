"""Dense linear-algebra core: Cholesky, SPD inverse/sqrt, symmetric and
Hermitian eigendecomposition.

All matrices here are small (a few modes, or one discretization grid), so
everything is dense and double precision.  Positive definiteness is always
an explicit check: a pivot at or below ``dim * eps * max(diag)`` raises
``NotPositiveDefinite`` instead of being regularized away.
"""

from __future__ import annotations

import numpy as np

from .errors import NoConvergence, NotPositiveDefinite

_EPS = np.finfo(float).eps

__all__ = [
    "cholesky",
    "inverse_spd",
    "sym_eig",
    "herm_eig",
    "sqrt_spd",
    "require_symmetric",
    "require_hermitian",
]


def _as_square(m: np.ndarray, dtype=float) -> np.ndarray:
    a = np.asarray(m, dtype=dtype)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def require_symmetric(m: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Validate symmetry within ``tol`` (relative) and return the symmetrized
    array, killing round-off asymmetry."""
    a = _as_square(m)
    scale = max(np.abs(a).max(), 1.0)
    if np.abs(a - a.T).max() > tol * scale:
        raise ValueError("matrix is not symmetric")
    return 0.5 * (a + a.T)


def require_hermitian(m: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Validate conjugate symmetry within ``tol`` (relative)."""
    a = _as_square(m, dtype=complex)
    scale = max(np.abs(a).max(), 1.0)
    if np.abs(a - a.conj().T).max() > tol * scale:
        raise ValueError("matrix is not Hermitian")
    return 0.5 * (a + a.conj().T)


def cholesky(m: np.ndarray) -> np.ndarray:
    """Lower-triangular L with L @ L.T == m for symmetric positive definite m.

    Raises ``NotPositiveDefinite`` when a pivot (= L[i,i]**2) falls at or
    below ``dim * eps * max(diag)``.
    """
    a = require_symmetric(m)
    dim = a.shape[0]
    try:
        L = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"matrix is not positive definite: {exc}") from exc
    threshold = dim * _EPS * max(np.diag(a).max(), 0.0)
    pivots = np.diag(L) ** 2
    if pivots.min() <= threshold:
        raise NotPositiveDefinite(
            f"pivot {pivots.min():.3e} at or below threshold {threshold:.3e}"
        )
    return L


def inverse_spd(m: np.ndarray) -> np.ndarray:
    """Inverse of an SPD matrix via its Cholesky factor."""
    L = cholesky(m)
    Linv = np.linalg.solve(L, np.eye(L.shape[0]))
    inv = Linv.T @ Linv
    return 0.5 * (inv + inv.T)


def sym_eig(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix.

    Returns (eigenvalues ascending, orthogonal eigenvector matrix V) with
    m @ V == V @ diag(w).
    """
    a = require_symmetric(m)
    try:
        w, V = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"symmetric eigensolver failed: {exc}") from exc
    return w, V


def herm_eig(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix (real eigenvalues, unitary V)."""
    a = require_hermitian(m)
    try:
        w, V = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"Hermitian eigensolver failed: {exc}") from exc
    return w, V


def sqrt_spd(m: np.ndarray) -> np.ndarray:
    """Symmetric positive definite square root of an SPD matrix."""
    w, V = sym_eig(m)
    dim = m.shape[0] if hasattr(m, "shape") else len(m)
    threshold = dim * _EPS * max(w.max(), 0.0)
    if w.min() <= threshold:
        raise NotPositiveDefinite(
            f"eigenvalue {w.min():.3e} at or below threshold {threshold:.3e}"
        )
    root = (V * np.sqrt(w)) @ V.T
    return 0.5 * (root + root.T)
