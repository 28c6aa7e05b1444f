"""Exception and warning types shared across the package."""


class QesError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(QesError, ValueError):
    """A model specification violates its parameter domain."""


class CouplingOutOfRange(ValidationError):
    """Coupling beyond the spectral-collapse boundary (2|g| >= omega for the
    2-photon model, |g| >= omega for the two-mode model)."""


class ZeroCoupling(ValidationError):
    """g = 0: the spin sectors decouple and the Bargmann prefactor rate is
    undefined; solve the trivial uncoupled problem directly instead."""


class BadSector(ValidationError):
    """Sector index outside the allowed set for the model."""


class WrongModel(QesError, TypeError):
    """Operation requested for a model kind it is not defined for."""


class NoPhysicalSolution(QesError):
    """Pencil produced no real, non-negative delta^2 branch."""


class IllConditioned(QesError):
    """Eigenpair residual too large to trust the returned branch."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class DegenerateRoots(QesError):
    """Root-system equations are singular: coincident roots, or a root at a
    pole of the Rabi root equations."""


class DegenerateAtomBranch(QesError):
    """delta = 0 branch: the lower spinor component is not defined by the
    elimination formula."""


class WindowExceeded(QesError):
    """Requested energy lies outside the truncation-reliable window; raise
    n_max before matching."""


class DegenerateAtomWarning(UserWarning):
    """delta = 0: the coupled equations decouple into exactly solvable
    oscillator branches."""
