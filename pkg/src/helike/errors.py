"""Exception types shared across the package."""


class HelikeError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(HelikeError, ValueError):
    """A construction parameter is outside its documented range."""


class InvalidQuantumNumberError(HelikeError, ValueError):
    """Angular-momentum arguments are inconsistent (integrality, |m| > j, ...)."""


class InvalidCouplingError(HelikeError, ValueError):
    """The requested orbital pair cannot couple to the requested L or S."""


class UnsupportedSymmetryError(HelikeError, NotImplementedError):
    """Requested (L, S) symmetry is reserved but not implemented (L > 0)."""


class FactorizationError(HelikeError, RuntimeError):
    """Overlap matrix is not positive-definite; the basis is degenerate."""


class AmbiguousStateError(HelikeError, RuntimeError):
    """No eigenstate carries a dominant weight on the target configuration."""

    def __init__(self, message, best_index=None, best_weight=None):
        super().__init__(message)
        self.best_index = best_index
        self.best_weight = best_weight


class NegativeEigenvalueError(HelikeError, RuntimeError):
    """A reduced-density-matrix eigenvalue is significantly negative."""


class InconsistentInputError(HelikeError, ValueError):
    """Two arguments that must describe the same object do not."""
