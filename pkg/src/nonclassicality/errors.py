"""Exception hierarchy.

Two families: :class:`ValidationError` for inputs that violate a
precondition, and :class:`NumericalError` for computations that cannot
deliver a trustworthy number (divergent series, unresolved quadrature,
regimes where the P-function is not a regular function).
"""


class NonclassicalityError(Exception):
    """Base class for all package errors."""


class ValidationError(NonclassicalityError, ValueError):
    """Malformed or out-of-domain input."""


class UnboundedThresholdError(ValidationError):
    """The thermal threshold is infinite (lossless channel)."""


class TruncationError(ValidationError):
    """A Fock cutoff is too small for the requested tail tolerance."""

    def __init__(self, message, tail_mass):
        super().__init__(f"{message} (tail mass {tail_mass:.3e})")
        self.tail_mass = tail_mass


class NumericalError(NonclassicalityError, ArithmeticError):
    """A computation could not reach its accuracy contract."""


class QuadratureError(NumericalError):
    def __init__(self, message, residual):
        super().__init__(f"{message} (residual estimate {residual:.3e})")
        self.residual = residual


class OverflowGuardError(NumericalError):
    """Fock-basis evaluation would lose all significant digits."""


class ThresholdError(NumericalError):
    """Channel parameters outside the regime where the request makes sense."""


class SeriesDivergenceError(NumericalError):
    def __init__(self, message, ratio):
        super().__init__(f"{message} (|base| = {ratio:.6g})")
        self.ratio = ratio


class GridResolutionError(ValidationError):
    """Phase-space grid too coarse to resolve the function being scanned."""
