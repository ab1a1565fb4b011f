"""Exception types raised across the package."""


class InfoGainError(Exception):
    """Base class for all package errors."""


class DomainError(InfoGainError, ValueError):
    """Input violates a modelling assumption (a < 0, alpha > 0, ...)."""


class SingularInput(InfoGainError, ValueError):
    """A closed-form constant is undefined for this input."""


class DegenerateCase(InfoGainError, ValueError):
    """The instance sits on a boundary where a formula diverges."""


class NumericalFailure(InfoGainError, RuntimeError):
    """A root-find or shooting step could not be completed."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class NoBracket(NumericalFailure):
    """The supplied interval does not bracket a sign change."""


class ShapeError(InfoGainError, ValueError):
    """Matrix dimensions are inconsistent."""
