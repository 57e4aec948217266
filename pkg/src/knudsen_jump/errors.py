"""Exception hierarchy for the solver."""


class KnudsenJumpError(Exception):
    """Base class for all package errors."""


class RegimeError(KnudsenJumpError):
    """The requested operation is not defined for this drift speed."""

    def __init__(self, message, regime=None):
        super().__init__(message)
        self.regime = regime


class MissingFreeParameterError(RegimeError):
    """A condensation regime needs caller-supplied free parameters."""

    def __init__(self, message, regime=None, required=()):
        super().__init__(message, regime=regime)
        self.required = tuple(required)


class NumericalError(KnudsenJumpError):
    """A numerical consistency check failed beyond its tolerance."""


class SingularSystemError(NumericalError):
    """A linear system for expansion constants is ill conditioned."""


class QuadratureError(NumericalError):
    """A quadrature did not reach its target accuracy."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class NonConvergenceError(NumericalError):
    """Source iteration exceeded its iteration budget."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class IllConditionedError(NumericalError):
    """The far-field least-squares fit is ill conditioned (slab too short)."""
