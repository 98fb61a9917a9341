"""Energy-constrained entanglement-assisted capacity of the position measurement.

The capacity is the maximum entropy reduction over Gaussian states whose
mean energy Sp(eps_qq alpha_qq) + Sp(eps_pp alpha_pp) meets a budget E.
The search space can be restricted to block-diagonal covariance matrices
(alpha_qp = 0): reflecting p -> -p leaves both the measurement and the
energy invariant, and ER is concave, so the symmetrized state does at
least as well.

One mode with the oscillator form eps = I/2 reduces to a 1-D maximization
over alpha_qq with alpha_qq + alpha_pp = 2E; exact measurement (beta = 0)
has the closed form g(E - 1/2).  Multimode problems decouple into
per-mode problems plus an outer energy allocation whenever eps_qq,
eps_pp and beta commute; otherwise a seeded coordinate-ascent search
over block parameters provides a best-effort lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import mats
from .errors import DimensionMismatch, DomainError, InfeasibleEnergy
from .gaussian import CovarianceMatrix, g
from .er import entropy_reduction, er_one_mode
from .measurement import as_noise

__all__ = [
    "EnergyForm",
    "CapacityResult",
    "mean_energy",
    "ground_energy",
    "cea_one_mode",
    "cea_exact",
    "cea_multimode",
    "sweep",
]


@dataclass
class EnergyForm:
    """Quadratic Hamiltonian q^T eps_qq q + p^T eps_pp p with budget E."""

    eps_qq: np.ndarray
    eps_pp: np.ndarray
    E: float

    def __post_init__(self):
        self.eps_qq = np.atleast_2d(np.asarray(self.eps_qq, dtype=float))
        self.eps_pp = np.atleast_2d(np.asarray(self.eps_pp, dtype=float))
        if self.eps_qq.shape != self.eps_pp.shape or self.eps_qq.shape[0] != self.eps_qq.shape[1]:
            raise DimensionMismatch("eps_qq and eps_pp must be square matrices of equal size")
        # SPD required; cholesky raises NotPositiveDefinite otherwise
        mats.cholesky(mats.require_symmetric(self.eps_qq))
        mats.cholesky(mats.require_symmetric(self.eps_pp))
        self.E = float(self.E)
        if not (math.isfinite(self.E) and self.E > 0):
            raise DomainError("energy budget must be positive and finite")

    @property
    def s(self) -> int:
        return self.eps_qq.shape[0]

    @classmethod
    def oscillator(cls, E: float, s: int = 1) -> "EnergyForm":
        """Standard form sum_j (q_j^2 + p_j^2)/2 with budget E."""
        return cls(0.5 * np.eye(s), 0.5 * np.eye(s), E)


@dataclass
class CapacityResult:
    value: float
    optimizer_alpha: CovarianceMatrix
    constraint_residual: float
    converged: bool = True

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "optimizer_alpha": self.optimizer_alpha.to_json(),
            "constraint_residual": self.constraint_residual,
            "converged": self.converged,
        }


def mean_energy(alpha: CovarianceMatrix, h: EnergyForm) -> float:
    """Trace pairing Sp(eps_qq alpha_qq) + Sp(eps_pp alpha_pp)."""
    if alpha.s != h.s:
        raise DimensionMismatch(f"state is {alpha.s}-mode, Hamiltonian is {h.s}-mode")
    return float(np.trace(h.eps_qq @ alpha.alpha_qq) + np.trace(h.eps_pp @ alpha.alpha_pp))


def ground_energy(h: EnergyForm) -> float:
    """Minimal mean energy over valid states: Sp (eps_qq^1/2 eps_pp eps_qq^1/2)^1/2."""
    root = mats.sqrt_spd(h.eps_qq)
    w, _ = mats.sym_eig(root @ h.eps_pp @ root)
    return float(np.sum(np.sqrt(np.clip(w, 0.0, None))))


def _golden_max(f, lo: float, hi: float, tol: float = 1e-10):
    """Golden-section maximization of a scalar function on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = c if fc >= fd else d
    return x, max(fc, fd)


def _grid_then_golden(f, lo: float, hi: float, n_grid: int, tol: float):
    """Grid scan (endpoints included) then golden refinement of the best bracket."""
    if hi - lo < 1e-15:
        return lo, f(lo)
    xs = np.linspace(lo, hi, n_grid)
    vals = np.array([f(x) for x in xs])
    i = int(np.argmax(vals))
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, n_grid - 1)]
    x, v = _golden_max(f, a, b, tol)
    if vals[i] > v:
        return float(xs[i]), float(vals[i])
    return float(x), float(v)


def _one_mode_best(eps_q: float, eps_p: float, beta: float, e: float,
                   n_grid: int = 512, tol: float = 1e-10):
    """Maximize ER over one-mode states with eps_q a + eps_p b = e, ab >= 1/4.

    Returns (value, alpha_qq, alpha_pp).  `e` must be at least the mode's
    ground energy sqrt(eps_q eps_p).
    """
    disc = e * e - eps_q * eps_p
    if disc < 0:
        if disc < -1e-12 * max(1.0, e * e):
            raise InfeasibleEnergy(
                f"mode energy {e} is below the ground energy {math.sqrt(eps_q * eps_p):.6g}"
            )
        disc = 0.0
    root = math.sqrt(disc)
    lo = (e - root) / (2.0 * eps_q)
    hi = (e + root) / (2.0 * eps_q)

    def f(a_qq: float) -> float:
        a_pp = (e - eps_q * a_qq) / eps_p
        return er_one_mode(a_qq, 0.0, a_pp, beta)

    a_best, value = _grid_then_golden(f, lo, hi, n_grid, tol)
    return value, a_best, (e - eps_q * a_best) / eps_p


def cea_one_mode(beta: float, E: float) -> CapacityResult:
    """Capacity of the one-mode oscillator problem: max ER at (q^2+p^2)/2 energy E.

    alpha_qq + alpha_pp = 2E on the optimizer (the constraint is always
    active); the inner maximization runs a 512-point grid scan plus
    golden-section refinement, since unimodality of the objective is not
    established.  beta = 0 routes to the exact closed form g(E - 1/2).
    """
    if beta < 0:
        raise DomainError("beta must be nonnegative")
    if E < 0.5 - 1e-12:
        raise InfeasibleEnergy(f"energy budget {E} is below the vacuum energy 0.5")
    E = max(E, 0.5)
    if beta == 0.0:
        alpha = CovarianceMatrix.one_mode(E, 0.0, E)
        return CapacityResult(cea_exact(E), alpha, 0.0, True)
    value, a_qq, a_pp = _one_mode_best(0.5, 0.5, beta, E)
    alpha = CovarianceMatrix.one_mode(a_qq, 0.0, a_pp)
    residual = 0.5 * (a_qq + a_pp) - E
    return CapacityResult(value, alpha, residual, True)


def cea_exact(E: float) -> float:
    """Capacity g(E - 1/2) of the exact position measurement (beta -> 0)."""
    if E < 0.5 - 1e-12:
        raise InfeasibleEnergy(f"energy budget {E} is below the vacuum energy 0.5")
    return g(max(E - 0.5, 0.0))


def _commutes(x: np.ndarray, y: np.ndarray) -> bool:
    scale = max(np.abs(x).max() * np.abs(y).max(), 1e-30)
    return bool(np.abs(x @ y - y @ x).max() <= 1e-10 * scale)


def _joint_eigenbasis(matrices: list[np.ndarray]):
    """Orthogonal Q diagonalizing every matrix in the (commuting) list, or None."""
    mix = sum(c * m for c, m in zip((1.0, math.sqrt(2.0), math.sqrt(3.0)), matrices))
    _, Q = mats.sym_eig(mix)
    diags = []
    for m in matrices:
        d = Q.T @ m @ Q
        off = d - np.diag(np.diag(d))
        if np.abs(off).max() > 1e-8 * max(np.abs(d).max(), 1e-30):
            return None, None
        diags.append(np.diag(d).copy())
    return Q, diags


def _allocate_commuting(eps_q, eps_p, betas, E: float, max_sweeps: int = 200):
    """Outer energy allocation across decoupled modes (pairwise ascent).

    ER is concave so per-mode capacity is concave in the mode energy;
    pairwise golden-section exchanges converge to the optimal split.
    """
    s = len(eps_q)
    e_min = np.sqrt(eps_q * eps_p)
    slack = E - float(e_min.sum())
    if slack < -1e-12 * max(1.0, E):
        raise InfeasibleEnergy(
            f"energy budget {E} is below the ground energy {float(e_min.sum()):.6g}"
        )
    slack = max(slack, 0.0)
    e = e_min + slack / s

    def mode_value(j: int, ej: float, n_grid: int = 128, tol: float = 1e-8) -> float:
        return _one_mode_best(eps_q[j], eps_p[j], betas[j], ej, n_grid, tol)[0]

    converged = s == 1
    if s > 1:
        best = sum(mode_value(j, e[j]) for j in range(s))
        for _ in range(max_sweeps):
            for i in range(s):
                for j in range(i + 1, s):
                    total = e[i] + e[j]
                    lo, hi = e_min[i], total - e_min[j]
                    if hi - lo < 1e-14:
                        continue
                    ei, _ = _grid_then_golden(
                        lambda t: mode_value(i, t) + mode_value(j, total - t),
                        lo, hi, 64, 1e-9,
                    )
                    e[i], e[j] = ei, total - ei
            new_best = sum(mode_value(j, e[j]) for j in range(s))
            if new_best <= best + 1e-11:
                converged = True
                break
            best = new_best

    value = 0.0
    a = np.empty(s)
    b = np.empty(s)
    for j in range(s):
        vj, a[j], b[j] = _one_mode_best(eps_q[j], eps_p[j], betas[j], float(e[j]))
        value += vj
    return value, a, b, converged


def _ascent_eval(G: np.ndarray, W: np.ndarray, h: EnergyForm, noise, E: float):
    """ER of the block state built from shape (G, W), rescaled onto Sp eps alpha = E.

    alpha_qq = t G and alpha_pp = (1/t) G^-1/2 W G^-1/2; the symplectic
    spectrum is sqrt(eig W), so W >= I/4 keeps every candidate valid.
    Returns (value, alpha) or None when no rescaling t > 0 meets E.
    """
    try:
        root = mats.sqrt_spd(G)
        root_inv = mats.inverse_spd(root)
    except Exception:
        return None
    app0 = root_inv @ W @ root_inv
    A = float(np.trace(h.eps_qq @ G))
    B = float(np.trace(h.eps_pp @ app0))
    disc = E * E - 4.0 * A * B
    if disc < 0:
        return None
    best = None
    for t in ((E + math.sqrt(disc)) / (2.0 * A), (E - math.sqrt(disc)) / (2.0 * A)):
        if t <= 0:
            continue
        alpha = CovarianceMatrix(t * G, np.zeros_like(G), app0 / t)
        try:
            value = entropy_reduction(alpha, noise).value
        except Exception:
            continue
        if best is None or value > best[0]:
            best = (value, alpha)
    return best


def _ascent_search(h: EnergyForm, noise, E: float, restarts: int, seed: int):
    """Seeded coordinate ascent over (R, S) with G = R^T R, W = I/4 + S^T S."""
    s = h.s
    rng = np.random.default_rng(seed)
    overall = None
    overall_converged = False
    scale = E / max(ground_energy(h), 1e-12)
    for r in range(restarts):
        nu0 = (0.5, 1.0, 2.0)[r % 3] * math.sqrt(scale)
        R = math.sqrt(scale) * np.eye(s) + 0.05 * rng.standard_normal((s, s))
        S = math.sqrt(max(nu0 * nu0 - 0.25, 1e-4)) * np.eye(s) \
            + 0.05 * rng.standard_normal((s, s))

        def value_of(Rm, Sm):
            out = _ascent_eval(Rm.T @ Rm + 1e-10 * np.eye(s), 0.25 * np.eye(s) + Sm.T @ Sm,
                               h, noise, E)
            return out

        cur = value_of(R, S)
        if cur is None:
            continue
        converged = False
        for _ in range(60):
            before = cur[0]
            for which in (0, 1):
                M = R if which == 0 else S
                for i in range(s):
                    for j in range(s):
                        base = M[i, j]
                        span = 0.5 * max(abs(base), 0.2)

                        def f(t):
                            M[i, j] = t
                            out = value_of(R, S)
                            M[i, j] = base
                            return -np.inf if out is None else out[0]

                        t_best, v_best = _grid_then_golden(f, base - span, base + span, 17, 1e-9)
                        if v_best > cur[0]:
                            M[i, j] = t_best
                            cur = value_of(R, S)
            if cur[0] - before < 1e-9:
                converged = True
                break
        if overall is None or cur[0] > overall[0]:
            overall = cur
            overall_converged = converged
    if overall is None:
        raise InfeasibleEnergy(f"no valid state meets the energy budget {E}")
    return overall[0], overall[1], overall_converged


def cea_multimode(beta, h: EnergyForm, E: float | None = None,
                  restarts: int = 8, seed: int = 20260814) -> CapacityResult:
    """Capacity for s modes under the block Hamiltonian h with SPD noise beta.

    When eps_qq, eps_pp and beta pairwise commute the problem decouples in
    their joint eigenbasis into one-mode problems tied by an energy
    allocation, which is solved to high accuracy.  Otherwise a seeded
    coordinate-ascent search over block-diagonal covariances reports a
    best-effort lower bound; `converged` is False when the ascent hit its
    iteration cap without stalling improvement.
    """
    noise = as_noise(beta, h.s)
    if E is None:
        E = h.E
    E = float(E)
    e0 = ground_energy(h)
    if E < e0 - 1e-12 * max(1.0, abs(E)):
        raise InfeasibleEnergy(f"energy budget {E} is below the ground energy {e0:.6g}")

    b = noise.beta
    if _commutes(h.eps_qq, h.eps_pp) and _commutes(h.eps_qq, b) and _commutes(h.eps_pp, b):
        Q, diags = _joint_eigenbasis([h.eps_qq, h.eps_pp, b])
        if Q is not None:
            eps_q, eps_p, betas = diags
            value, a, bb, converged = _allocate_commuting(eps_q, eps_p, betas, E)
            alpha = CovarianceMatrix(
                Q @ np.diag(a) @ Q.T, np.zeros((h.s, h.s)), Q @ np.diag(bb) @ Q.T
            )
            residual = mean_energy(alpha, h) - E
            return CapacityResult(value, alpha, residual, converged)

    value, alpha, converged = _ascent_search(h, noise, E, restarts, seed)
    residual = mean_energy(alpha, h) - E
    return CapacityResult(value, alpha, residual, converged)


def sweep(E_values, beta_values) -> list[dict]:
    """Capacity table rows over a (beta, E) grid; beta = 0 uses the exact form."""
    rows = []
    for beta in beta_values:
        for E in E_values:
            res = cea_one_mode(float(beta), float(E))
            rows.append(
                {
                    "beta": float(beta),
                    "E": float(E),
                    "C_ea_nats": res.value,
                    "alpha_qq_opt": float(res.optimizer_alpha.alpha_qq[0, 0]),
                    "alpha_pp_opt": float(res.optimizer_alpha.alpha_pp[0, 0]),
                    "converged": res.converged,
                }
            )
    return rows
