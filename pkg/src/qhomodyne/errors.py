"""Exception hierarchy shared by all qhomodyne modules."""


class QHomodyneError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(QHomodyneError):
    """Operands have incompatible shapes or mode counts."""


class NotPositiveDefinite(QHomodyneError):
    """A matrix required to be SPD has a non-positive pivot."""


class NoConvergence(QHomodyneError):
    """An iterative routine exhausted its iteration budget."""


class PairingFailure(QHomodyneError):
    """Eigenvalues expected in degenerate pairs failed to pair up."""


class InvalidState(QHomodyneError):
    """A covariance matrix violates the uncertainty relation."""


class DomainError(QHomodyneError):
    """A scalar argument lies outside the function's domain."""


class InfeasibleEnergy(QHomodyneError):
    """Energy budget below the ground-state energy of the Hamiltonian."""


class GridTooSmall(QHomodyneError):
    """Discretization grid cannot represent the requested state or stencil."""
