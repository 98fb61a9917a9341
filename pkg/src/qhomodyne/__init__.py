"""Information-theoretic quantities of Gaussian approximate position measurements.

Posterior states, entropy reduction, and energy-constrained
entanglement-assisted capacity of noisy homodyning, with an independent
discretized-kernel oracle validating every closed form.
"""

from .errors import (
    QHomodyneError,
    DimensionMismatch,
    NotPositiveDefinite,
    NoConvergence,
    PairingFailure,
    InvalidState,
    DomainError,
    InfeasibleEnergy,
    GridTooSmall,
)
from .gaussian import (
    CovarianceMatrix,
    MeanVector,
    ValidityReport,
    symplectic_form,
    symplectic_eigenvalues,
    validate,
    require_valid,
    g,
    entropy,
)
from .measurement import (
    NoiseMatrix,
    as_noise,
    PosteriorModel,
    OutcomeDistribution,
    outcome_distribution,
    posterior,
    posterior_mean,
)
from .er import ERResult, entropy_reduction, er_one_mode, er_exact
from .capacity import (
    EnergyForm,
    CapacityResult,
    mean_energy,
    ground_energy,
    cea_one_mode,
    cea_exact,
    cea_multimode,
    sweep,
)
from .oracle import (
    KernelGrid,
    DensityKernel,
    build_gaussian_kernel,
    apply_measurement_factor,
    kernel_entropy,
    PosteriorMoments,
    oracle_posterior_moments,
    oracle_outcome_weights,
    oracle_er,
    mixture_er,
    check_squeezed_marginal,
    run_verification,
)

__version__ = "0.1.0"

__all__ = [
    "QHomodyneError",
    "DimensionMismatch",
    "NotPositiveDefinite",
    "NoConvergence",
    "PairingFailure",
    "InvalidState",
    "DomainError",
    "InfeasibleEnergy",
    "GridTooSmall",
    "CovarianceMatrix",
    "MeanVector",
    "ValidityReport",
    "symplectic_form",
    "symplectic_eigenvalues",
    "validate",
    "require_valid",
    "g",
    "entropy",
    "NoiseMatrix",
    "as_noise",
    "PosteriorModel",
    "OutcomeDistribution",
    "outcome_distribution",
    "posterior",
    "posterior_mean",
    "ERResult",
    "entropy_reduction",
    "er_one_mode",
    "er_exact",
    "EnergyForm",
    "CapacityResult",
    "mean_energy",
    "ground_energy",
    "cea_one_mode",
    "cea_exact",
    "cea_multimode",
    "sweep",
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
    "run_verification",
    "__version__",
]
