"""Brute-force verification oracle on a discretized position grid.

Every closed form in the library (posterior covariance, outcome density,
entropy reduction) is re-derived here from first principles: the state is
represented by its position-space kernel K[k, l] = <xi_k| rho |xi_l> on a
uniform grid, the measurement is applied as an explicit multiplication
operator, and entropies come from dense eigendecompositions.  Nothing in
this module calls the closed-form entropy-reduction or posterior formulas,
so agreement between the two paths is genuine evidence rather than an
identity check.

Conventions (one mode, covariance alpha = [[a, c], [c, b]], mean (m_q, m_p)):

    K(xi, xi') = (2 pi a)^{-1/2} exp[ -(u - m_q)^2 / (2a)
                                      - v^2 (b - c^2/a) / 2
                                      + i v (m_p + c (u - m_q) / a) ]

with u = (xi + xi')/2 and v = xi - xi'.  The approximate position
measurement multiplies the kernel by v(xi_k) v(xi_l) where

    v(xi) = (2 pi beta)^{-1/4} exp(-(xi - x)^2 / (4 beta)),

the outcome weight is p(x) = h * trace of the result, and the normalized
result is the posterior kernel.  Momentum moments are extracted by
central finite differences of the kernel transverse to the diagonal:
with f(t) = K(u - t/2, u + t/2),

    <p>      =  i h sum_u f'(0),
    <p^2>    = -  h sum_u f''(0),
    <{q,p}>/2 = i h sum_u u f'(0),

using 4th-order stencils on the sub/superdiagonals (t-spacing 2h).

The oracle is deliberately restricted to one mode: every closed form it
checks is either intrinsically one-mode or mode-additive, and an N^s grid
would be hopeless anyway.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DimensionMismatch, DomainError, GridTooSmall
from .gaussian import CovarianceMatrix, MeanVector, entropy, require_valid
from .er import er_one_mode
from .measurement import outcome_distribution, posterior, posterior_mean

__all__ = [
    "KernelGrid",
    "DensityKernel",
    "build_gaussian_kernel",
    "apply_measurement_factor",
    "kernel_entropy",
    "PosteriorMoments",
    "oracle_posterior_moments",
    "oracle_outcome_weights",
    "oracle_er",
    "mixture_er",
    "check_squeezed_marginal",
    "acceptance_er_cases",
    "moment_check_cases",
    "displacement_cases",
    "random_mixture",
    "run_verification",
]

# Half-width of integration windows in units of the relevant standard
# deviation; exp(-8^2/2) ~ 1e-14 keeps truncated tail mass irrelevant.
SPREAD = 8.0

DEFAULT_N = 384
DEFAULT_NODES = 41


@dataclass(frozen=True)
class KernelGrid:
    """Uniform position grid xi_k = -L + k * 2L/(N-1), k = 0..N-1."""

    n: int = DEFAULT_N
    half_width: float = SPREAD

    def __post_init__(self):
        if self.n < 64:
            raise DomainError(f"grid needs at least 64 points, got {self.n}")
        if not (self.half_width > 0 and math.isfinite(self.half_width)):
            raise DomainError("grid half-width must be positive and finite")

    @property
    def s(self) -> int:
        # the oracle discretizes a single mode only
        return 1

    @property
    def step(self) -> float:
        return 2.0 * self.half_width / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.n)

    @classmethod
    def for_state(
        cls,
        alpha_qq: float,
        beta: float | None = None,
        mean_q: float = 0.0,
        n: int = DEFAULT_N,
        spread: float = SPREAD,
    ) -> "KernelGrid":
        """Grid sized so prior and every posterior along the outcome window fit.

        The prior needs `spread` position stddevs.  When a measurement of
        noise `beta` follows, outcomes are drawn up to X = spread *
        sqrt(alpha_qq + beta) from the mean, and the posterior mass then
        sits near K_q * x with width sigma_hat = sqrt(alpha_qq * beta /
        (alpha_qq + beta)); the grid must cover that excursion too, or the
        far-node outcome weights lose relative accuracy.
        """
        if alpha_qq <= 0:
            raise DomainError("alpha_qq must be positive")
        half = spread * math.sqrt(max(alpha_qq, beta or 0.0))
        if beta is not None:
            if beta <= 0:
                raise DomainError("beta must be positive")
            gain = alpha_qq / (alpha_qq + beta)
            window = spread * math.sqrt(alpha_qq + beta) + abs(mean_q)
            sigma_hat = math.sqrt(alpha_qq * beta / (alpha_qq + beta))
            half = max(half, gain * window + 6.5 * sigma_hat)
        return cls(n=n, half_width=half + abs(mean_q))


@dataclass
class DensityKernel:
    """Dense kernel entries[k, l] = <xi_k| rho |xi_l> on `grid`.

    For a trace-one operator h * trace(entries) = 1; unnormalized kernels
    (measurement applied, weight not yet divided out) carry their weight
    in the trace.
    """

    grid: KernelGrid
    entries: np.ndarray

    def trace(self) -> float:
        return float(self.grid.step * np.trace(self.entries).real)

    def normalized(self) -> "DensityKernel":
        t = self.trace()
        if t <= 0:
            raise GridTooSmall("kernel trace is not positive; grid cannot hold the state")
        return DensityKernel(self.grid, self.entries / t)


def build_gaussian_kernel(
    mean: MeanVector | None,
    alpha: CovarianceMatrix,
    grid: KernelGrid | None = None,
) -> DensityKernel:
    """Position-space kernel of the one-mode Gaussian state (mean, alpha).

    Raises GridTooSmall when the discretized trace h*sum(diag) strays from
    1 by more than 1e-6, i.e. the grid clips the state.  The returned
    kernel is renormalized to trace one exactly.
    """
    if alpha.s != 1:
        raise DimensionMismatch("oracle kernels support one mode only")
    require_valid(alpha)
    if mean is None:
        mean = MeanVector.zero(1)
    if mean.s != 1:
        raise DimensionMismatch("mean vector must be one-mode")
    a = float(alpha.alpha_qq[0, 0])
    c = float(alpha.alpha_qp[0, 0])
    b = float(alpha.alpha_pp[0, 0])
    m_q = float(mean.m_q[0])
    m_p = float(mean.m_p[0])
    if grid is None:
        grid = KernelGrid.for_state(a, mean_q=m_q)

    xi = grid.points
    u = 0.5 * (xi[:, None] + xi[None, :]) - m_q
    v = xi[:, None] - xi[None, :]
    b_tilde = b - c * c / a  # conditional p-variance given q; > 0 for valid alpha
    real_part = -(u * u) / (2.0 * a) - 0.5 * b_tilde * v * v
    if m_p == 0.0 and c == 0.0:
        entries = np.exp(real_part) / math.sqrt(2.0 * math.pi * a)
    else:
        phase = v * (m_p + (c / a) * u)
        entries = np.exp(real_part + 1j * phase) / math.sqrt(2.0 * math.pi * a)

    kernel = DensityKernel(grid, entries)
    t = kernel.trace()
    if abs(t - 1.0) > 1e-6:
        raise GridTooSmall(
            f"kernel trace {t:.8f} deviates from 1 by more than 1e-6 "
            f"(N={grid.n}, L={grid.half_width:.3g})"
        )
    kernel.entries /= t
    return kernel


def apply_measurement_factor(
    kernel: DensityKernel, x: float, beta: float
) -> tuple[DensityKernel, float]:
    """Multiply by v(xi_k) v(xi_l) for outcome x; return (kernel, weight p(x)).

    The returned kernel is unnormalized: its trace is the weight.  Raises
    GridTooSmall when the measured mass leans on the grid edge (edge
    diagonal above 1e-8 of the peak), which is what undersizing looks
    like in practice.
    """
    if beta <= 0:
        raise DomainError("beta must be positive")
    xi = kernel.grid.points
    v = (2.0 * math.pi * beta) ** -0.25 * np.exp(-((xi - x) ** 2) / (4.0 * beta))
    measured = kernel.entries * v[:, None] * v[None, :]
    diag = np.abs(np.diagonal(measured))
    peak = diag.max()
    if peak <= 0 or max(diag[0], diag[-1]) > 1e-8 * peak:
        raise GridTooSmall(
            f"measured kernel for outcome x={x:.3g} leans on the grid edge "
            f"(N={kernel.grid.n}, L={kernel.grid.half_width:.3g})"
        )
    out = DensityKernel(kernel.grid, measured)
    return out, out.trace()


def kernel_entropy(kernel: DensityKernel, base: float | None = None) -> float:
    """von Neumann entropy -sum lam ln lam of the discretized operator h*K.

    Eigenvalues below 1e-12 (discretization noise, including tiny
    negatives) are clamped to contribute zero; the clamp is asserted not
    to move the result by more than 1e-6.
    """
    h = kernel.grid.step
    lam = np.linalg.eigvalsh(h * kernel.entries)
    if lam[0] < -1e-9:
        raise GridTooSmall(
            f"kernel has eigenvalue {lam[0]:.3e} < -1e-9; grid too coarse or too small"
        )
    keep = lam >= 1e-12
    clipped = np.abs(lam[~keep])
    clipped = clipped[clipped > 0]
    if clipped.size and float(np.sum(-clipped * np.log(clipped))) > 1e-6:
        raise GridTooSmall("entropy clamp would shift the result by more than 1e-6")
    kept = lam[keep]
    value = float(-np.sum(kept * np.log(kept))) + 0.0  # avoid -0.0
    if base is not None:
        value /= math.log(base)
    return value


class PosteriorMoments(NamedTuple):
    m_q: float
    m_p: float
    alpha_qq: float
    alpha_pp: float
    alpha_qp: float


def oracle_posterior_moments(kernel: DensityKernel) -> PosteriorMoments:
    """First and second moments read off a normalized kernel.

    q-moments are diagonal sums; p-moments use 4th-order central
    differences of f(t) = K(u - t/2, u + t/2) sampled on the 2nd and 4th
    superdiagonals (t-spacing 2h), summed over interior diagonal sites.
    """
    grid = kernel.grid
    n, h, xi = grid.n, grid.step, grid.points
    K = kernel.entries
    d0 = np.diagonal(K).real

    m_q = h * float(np.sum(xi * d0))
    q2 = h * float(np.sum(xi * xi * d0))

    # f1[j] = K[j-1, j+1], f2[j] = K[j-2, j+2] for interior j
    sup2 = np.diagonal(K, offset=2)
    sup4 = np.diagonal(K, offset=4)
    j = slice(2, n - 2)
    f0 = d0[j]
    f1 = sup2[1 : n - 3]
    f2 = sup4[: n - 4]
    xj = xi[j]

    t = 2.0 * h
    # f(-t) = conj(f(t)) by hermiticity, so odd stencils reduce to Im parts
    d1 = 1j * (16.0 * f1.imag - 2.0 * f2.imag) / (12.0 * t)
    d2 = (32.0 * f1.real - 2.0 * f2.real - 30.0 * f0) / (12.0 * t * t)

    m_p = float((1j * h * np.sum(d1)).real)
    p2 = float((-h * np.sum(d2)).real)
    qp = float((1j * h * np.sum(xj * d1)).real)

    return PosteriorMoments(
        m_q=m_q,
        m_p=m_p,
        alpha_qq=q2 - m_q * m_q,
        alpha_pp=p2 - m_p * m_p,
        alpha_qp=qp - m_q * m_p,
    )


def _gauss_legendre_nodes(center: float, half_width: float, n_nodes: int):
    t, w = leggauss(n_nodes)
    return center + half_width * t, half_width * w


def oracle_outcome_weights(
    alpha: CovarianceMatrix,
    beta: float,
    mean: MeanVector | None = None,
    grid: KernelGrid | None = None,
    x_nodes: int = DEFAULT_NODES,
):
    """Outcome weights p(x) at Gauss-Legendre nodes over the outcome window.

    Returns (nodes, quadrature weights, kernel weights).  The quadrature-
    weighted sum of the kernel weights must be 1 within 1e-6, else the
    grid is rejected.
    """
    m_q = 0.0 if mean is None else float(mean.m_q[0])
    a = float(alpha.alpha_qq[0, 0])
    if grid is None:
        grid = KernelGrid.for_state(a, beta=beta, mean_q=m_q)
    kernel = build_gaussian_kernel(mean, alpha, grid)
    window = SPREAD * math.sqrt(a + beta)
    xs, wq = _gauss_legendre_nodes(m_q, window, x_nodes)
    weights = np.array([apply_measurement_factor(kernel, x, beta)[1] for x in xs])
    total = float(np.sum(wq * weights))
    if abs(total - 1.0) > 1e-6:
        raise GridTooSmall(
            f"quadrature-weighted outcome mass {total:.8f} deviates from 1 by more than 1e-6"
        )
    return xs, wq, weights


def oracle_er(
    alpha: CovarianceMatrix,
    beta: float,
    grid: KernelGrid | None = None,
    x_nodes: int = DEFAULT_NODES,
    mean: MeanVector | None = None,
) -> float:
    """Entropy reduction by direct integration: H(rho) - avg_x H(posterior).

    For a Gaussian input the posterior entropy cannot depend on the
    outcome (the posterior is a displaced copy of one fixed Gaussian), so
    the integral collapses: the entropy is evaluated at five spread-out
    quadrature nodes, asserted constant within 1e-4, and averaged.
    """
    if alpha.s != 1:
        raise DimensionMismatch("oracle_er supports one mode only")
    if beta <= 0:
        raise DomainError("beta must be positive")
    m_q = 0.0 if mean is None else float(mean.m_q[0])
    a = float(alpha.alpha_qq[0, 0])
    if grid is None:
        grid = KernelGrid.for_state(a, beta=beta, mean_q=m_q, n=DEFAULT_N)

    kernel = build_gaussian_kernel(mean, alpha, grid)
    prior_entropy = kernel_entropy(kernel)

    window = SPREAD * math.sqrt(a + beta)
    xs, wq = _gauss_legendre_nodes(m_q, window, x_nodes)
    weights = np.empty(x_nodes)
    probe = np.linspace(0, x_nodes - 1, 5).round().astype(int)
    probe_entropy = []
    for i, x in enumerate(xs):
        measured, weights[i] = apply_measurement_factor(kernel, float(x), beta)
        if i in probe:
            probe_entropy.append(kernel_entropy(measured.normalized()))
    total = float(np.sum(wq * weights))
    if abs(total - 1.0) > 1e-6:
        raise GridTooSmall(
            f"quadrature-weighted outcome mass {total:.8f} deviates from 1 by more than 1e-6"
        )
    probe_entropy = np.asarray(probe_entropy)
    if float(probe_entropy.std()) > 1e-4:
        raise GridTooSmall(
            "posterior entropy varies across outcomes for a Gaussian input "
            f"(stddev {probe_entropy.std():.2e}); grid is unreliable"
        )
    return prior_entropy - float(probe_entropy.mean())


def _mixture_grid(components, beta: float, alpha_qq_total: float, n: int) -> KernelGrid:
    """Common grid sized for every component and the full outcome window."""
    window = SPREAD * math.sqrt(alpha_qq_total + beta)
    half = SPREAD * math.sqrt(beta)
    for _, mean, alpha0 in components:
        a = float(alpha0.alpha_qq[0, 0])
        m_q = 0.0 if mean is None else abs(float(mean.m_q[0]))
        gain = a / (a + beta)
        sigma_hat = math.sqrt(a * beta / (a + beta))
        need = max(SPREAD * math.sqrt(a), gain * (window + m_q) + 6.5 * sigma_hat)
        half = max(half, need + m_q)
    return KernelGrid(n=n, half_width=half)


def mixture_er(
    components,
    beta: float,
    grid: KernelGrid | None = None,
    x_nodes: int = DEFAULT_NODES,
) -> tuple[float, CovarianceMatrix]:
    """ER of a finite Gaussian mixture, plus its total covariance.

    `components` is a list of (weight, mean, alpha0) with positive weights
    summing to 1 and overall mean zero.  The posterior of a mixture is
    genuinely outcome-dependent, so the full quadrature is evaluated —
    no entropy collapse as in `oracle_er`.
    """
    if beta <= 0:
        raise DomainError("beta must be positive")
    if not components:
        raise DomainError("mixture needs at least one component")
    weights = np.array([float(w) for w, _, _ in components])
    if np.any(weights <= 0) or abs(weights.sum() - 1.0) > 1e-9:
        raise DomainError("mixture weights must be positive and sum to 1")

    a_tot = c_tot = b_tot = 0.0
    mq_bar = mp_bar = 0.0
    for w, mean, alpha0 in components:
        require_valid(alpha0)
        if alpha0.s != 1:
            raise DimensionMismatch("mixture components must be one-mode")
        m_q = 0.0 if mean is None else float(mean.m_q[0])
        m_p = 0.0 if mean is None else float(mean.m_p[0])
        mq_bar += w * m_q
        mp_bar += w * m_p
        a_tot += w * (float(alpha0.alpha_qq[0, 0]) + m_q * m_q)
        c_tot += w * (float(alpha0.alpha_qp[0, 0]) + m_q * m_p)
        b_tot += w * (float(alpha0.alpha_pp[0, 0]) + m_p * m_p)
    if abs(mq_bar) > 1e-9 or abs(mp_bar) > 1e-9:
        raise DomainError("mixture must have zero overall mean")
    total = CovarianceMatrix.one_mode(a_tot, c_tot, b_tot)

    if grid is None:
        grid = _mixture_grid(components, beta, a_tot, DEFAULT_N)
    entries = np.zeros((grid.n, grid.n), dtype=complex)
    for w, mean, alpha0 in components:
        entries = entries + w * build_gaussian_kernel(mean, alpha0, grid).entries
    kernel = DensityKernel(grid, entries).normalized()
    prior_entropy = kernel_entropy(kernel)

    window = SPREAD * math.sqrt(a_tot + beta)
    xs, wq = _gauss_legendre_nodes(0.0, window, x_nodes)
    mass = 0.0
    mean_posterior_entropy = 0.0
    for x, w in zip(xs, wq):
        measured, p_x = apply_measurement_factor(kernel, float(x), beta)
        mass += w * p_x
        mean_posterior_entropy += w * p_x * kernel_entropy(measured.normalized())
    if abs(mass - 1.0) > 1e-6:
        raise GridTooSmall(
            f"quadrature-weighted outcome mass {mass:.8f} deviates from 1 by more than 1e-6"
        )
    return prior_entropy - mean_posterior_entropy, total


def check_squeezed_marginal(
    beta: float, grid: KernelGrid | None = None, x: float = 0.0
) -> float:
    """Sup-norm check of the squeezed-vacuum position marginal.

    The squeezed vacuum with covariance diag(beta, 1/(4 beta)), displaced
    to x, must have position diagonal (2 pi beta)^{-1/2}
    exp(-(xi - x)^2 / (2 beta)) — the exact noise profile the approximate
    position measurement realizes.  Returns the maximum deviation on the
    grid.
    """
    if beta <= 0:
        raise DomainError("beta must be positive")
    if grid is None:
        grid = KernelGrid.for_state(beta, mean_q=x)
    alpha = CovarianceMatrix.one_mode(beta, 0.0, 0.25 / beta)
    mean = MeanVector(np.array([x]), np.array([0.0]))
    kernel = build_gaussian_kernel(mean, alpha, grid)
    xi = grid.points
    target = np.exp(-((xi - x) ** 2) / (2.0 * beta)) / math.sqrt(2.0 * math.pi * beta)
    return float(np.max(np.abs(np.diagonal(kernel.entries).real - target)))


# ---------------------------------------------------------------------------
# canonical verification cases shared by the CLI report and the test suite
# ---------------------------------------------------------------------------


def acceptance_er_cases() -> list[dict]:
    """The 12-case closed-form-vs-oracle grid.

    alpha_qq in {0.6, 1, 2} crossed with symplectic eigenvalue nu in
    {0.5, 0.75, 1.5, 3}; alpha_qp and beta cycle through {0, 0.3} and
    {0.5, 1, 5} so both complex kernels and all noise scales appear.
    """
    cases = []
    qps = (0.0, 0.3)
    betas = (0.5, 1.0, 5.0)
    for i, a in enumerate((0.6, 1.0, 2.0)):
        for j, nu in enumerate((0.5, 0.75, 1.5, 3.0)):
            k = 4 * i + j
            c = qps[k % 2]
            beta = betas[k % 3]
            b = (nu * nu + c * c) / a
            cases.append(
                {
                    "alpha_qq": a,
                    "alpha_qp": c,
                    "alpha_pp": b,
                    "nu": nu,
                    "beta": beta,
                }
            )
    return cases


def moment_check_cases() -> list[dict]:
    """Six posterior-moment cases covering alpha_qp != 0 and x != 0."""
    return [
        {"alpha_qq": 1.0, "alpha_qp": 0.0, "alpha_pp": 1.0, "beta": 1.0, "x": 2.0},
        {"alpha_qq": 1.0, "alpha_qp": 0.0, "alpha_pp": 1.0, "beta": 1.0, "x": 0.0},
        {"alpha_qq": 0.6, "alpha_qp": 0.3, "alpha_pp": 1.0875, "beta": 0.5, "x": 1.0},
        {"alpha_qq": 2.0, "alpha_qp": 0.3, "alpha_pp": 1.17, "beta": 5.0, "x": -3.0},
        {"alpha_qq": 1.0, "alpha_qp": 0.5, "alpha_pp": 1.25, "beta": 1.0, "x": 1.7},
        {"alpha_qq": 0.6, "alpha_qp": 0.0, "alpha_pp": 3.75, "beta": 1.0, "x": -0.8},
    ]


def displacement_cases() -> list[dict]:
    """Displaced-input ER cases; ER must not see the displacement."""
    return [
        {"alpha_qq": 1.0, "alpha_qp": 0.0, "alpha_pp": 1.0, "beta": 1.0, "m": (1.3, -0.7)},
        {"alpha_qq": 1.0, "alpha_qp": 0.0, "alpha_pp": 1.0, "beta": 1.0, "m": (2.0, 2.0)},
        {"alpha_qq": 0.6, "alpha_qp": 0.3, "alpha_pp": 1.0875, "beta": 0.5, "m": (-2.0, 1.0)},
        {"alpha_qq": 2.0, "alpha_qp": 0.0, "alpha_pp": 1.125, "beta": 5.0, "m": (0.5, 2.0)},
    ]


def random_mixture(rng: np.random.Generator, max_components: int = 4):
    """A random centered Gaussian mixture and a noise level, for testing
    that the Gaussian state maximizes ER at fixed total covariance."""
    k = int(rng.integers(2, max_components + 1))
    w = rng.dirichlet(np.ones(k))
    m_q = rng.uniform(-1.5, 1.5, size=k)
    m_p = rng.uniform(-1.5, 1.5, size=k)
    m_q -= w @ m_q
    m_p -= w @ m_p
    components = []
    for i in range(k):
        a = float(np.exp(rng.uniform(-0.5, 0.7)))
        c = float(rng.uniform(-0.3, 0.3))
        nu = float(rng.uniform(0.5, 2.0))
        b = (nu * nu + c * c) / a
        components.append(
            (
                float(w[i]),
                MeanVector(np.array([m_q[i]]), np.array([m_p[i]])),
                CovarianceMatrix.one_mode(a, c, b),
            )
        )
    beta = float(rng.uniform(0.3, 3.0))
    return components, beta


def _report_case(case_id, closed_form, oracle_value, tolerance, grid):
    err = abs(oracle_value - closed_form)
    return {
        "case_id": case_id,
        "closed_form": closed_form,
        "oracle_value": oracle_value,
        "abs_error": err,
        "tolerance": tolerance,
        "grid": {"N": grid.n, "L": grid.half_width},
        "converged": bool(err <= tolerance),
    }


def run_verification(
    n: int = DEFAULT_N,
    x_nodes: int = DEFAULT_NODES,
    seed: int = 20260814,
    n_mixtures: int = 5,
) -> dict:
    """Run the full oracle suite; returns the JSON-serializable report.

    Covers: the 12 ER acceptance cases, posterior moments, outcome
    densities at all quadrature nodes, displaced inputs, the squeezed
    marginal, and seeded random mixtures against the Gaussian-maximizer
    bound.  Deterministic given the seed.
    """
    cases = []

    for i, c in enumerate(acceptance_er_cases()):
        alpha = CovarianceMatrix.one_mode(c["alpha_qq"], c["alpha_qp"], c["alpha_pp"])
        grid = KernelGrid.for_state(c["alpha_qq"], beta=c["beta"], n=n)
        closed = er_one_mode(c["alpha_qq"], c["alpha_qp"], c["alpha_pp"], c["beta"])
        value = oracle_er(alpha, c["beta"], grid=grid, x_nodes=x_nodes)
        cases.append(_report_case(f"er-{i}", closed, value, 1e-3, grid))

        xs, _, weights = oracle_outcome_weights(alpha, c["beta"], grid=grid, x_nodes=x_nodes)
        law = outcome_distribution(alpha, c["beta"])
        rel = max(
            abs(w - law.pdf([x])) / law.pdf([x]) for x, w in zip(xs, weights)
        )
        cases.append(_report_case(f"density-{i}", 0.0, rel, 1e-6, grid))

    for i, c in enumerate(moment_check_cases()):
        alpha = CovarianceMatrix.one_mode(c["alpha_qq"], c["alpha_qp"], c["alpha_pp"])
        grid = KernelGrid.for_state(c["alpha_qq"], beta=c["beta"], mean_q=0.0, n=n)
        model = posterior(alpha, c["beta"])
        mean_hat = posterior_mean(model, [c["x"]])
        kernel = build_gaussian_kernel(None, alpha, grid)
        measured, _ = apply_measurement_factor(kernel, c["x"], c["beta"])
        got = oracle_posterior_moments(measured.normalized())
        want = (
            float(mean_hat.m_q[0]),
            float(mean_hat.m_p[0]),
            float(model.alpha_hat.alpha_qq[0, 0]),
            float(model.alpha_hat.alpha_pp[0, 0]),
            float(model.alpha_hat.alpha_qp[0, 0]),
        )
        for name, w_val, g_val in zip(PosteriorMoments._fields, want, got):
            cases.append(_report_case(f"moments-{i}-{name}", w_val, g_val, 1e-3, grid))

    for i, c in enumerate(displacement_cases()):
        alpha = CovarianceMatrix.one_mode(c["alpha_qq"], c["alpha_qp"], c["alpha_pp"])
        mean = MeanVector(np.array([c["m"][0]]), np.array([c["m"][1]]))
        grid = KernelGrid.for_state(c["alpha_qq"], beta=c["beta"], mean_q=c["m"][0], n=n)
        closed = er_one_mode(c["alpha_qq"], c["alpha_qp"], c["alpha_pp"], c["beta"])
        value = oracle_er(alpha, c["beta"], grid=grid, x_nodes=x_nodes, mean=mean)
        cases.append(_report_case(f"displaced-{i}", closed, value, 2e-3, grid))

    for i, beta in enumerate((0.5, 1.0, 5.0)):
        grid = KernelGrid.for_state(beta, n=n)
        dev = check_squeezed_marginal(beta, grid=grid)
        cases.append(_report_case(f"squeezed-{i}", 0.0, dev, 1e-10, grid))

    rng = np.random.default_rng(seed)
    mix_specs = [
        # the canonical well-separated example: gap is visibly nonzero
        (
            [
                (0.5, MeanVector(np.array([1.0]), np.array([0.0])), CovarianceMatrix.vacuum()),
                (0.5, MeanVector(np.array([-1.0]), np.array([0.0])), CovarianceMatrix.vacuum()),
            ],
            1.0,
        )
    ]
    mix_specs += [random_mixture(rng) for _ in range(max(0, n_mixtures - 1))]
    for i, (components, beta) in enumerate(mix_specs):
        a_tot = sum(
            w * (float(al.alpha_qq[0, 0]) + (0.0 if m is None else float(m.m_q[0]) ** 2))
            for w, m, al in components
        )
        grid = _mixture_grid(components, beta, a_tot, n)
        value, total = mixture_er(components, beta, grid=grid, x_nodes=x_nodes)
        bound = er_one_mode(
            float(total.alpha_qq[0, 0]),
            float(total.alpha_qp[0, 0]),
            float(total.alpha_pp[0, 0]),
            beta,
        )
        # Gaussian maximizer: oracle value must not exceed the closed form
        cases.append(
            {
                "case_id": f"mixture-{i}",
                "closed_form": bound,
                "oracle_value": value,
                "abs_error": max(0.0, value - bound),
                "tolerance": 2e-3,
                "grid": {"N": grid.n, "L": grid.half_width},
                "converged": bool(value <= bound + 2e-3),
            }
        )

    return {
        "seed": seed,
        "n": n,
        "x_nodes": x_nodes,
        "cases": cases,
        "all_within_tolerance": all(c["converged"] for c in cases),
    }
