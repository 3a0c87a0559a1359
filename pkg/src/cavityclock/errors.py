"""Exception hierarchy.

All library errors derive from CavityClockError so callers can catch broadly;
the ValueError/RuntimeError mixins keep stdlib semantics for code that does not
know about this package.
"""


class CavityClockError(Exception):
    """Base class for all cavityclock errors."""


class ValidationError(CavityClockError, ValueError):
    """Invalid parameter or state."""


class HorizonError(ValidationError):
    """Cavity would intersect a horizon (Rindler h >= 2, or r <= r_s)."""


class QuadratureError(CavityClockError, RuntimeError):
    """Numerical quadrature failed to converge to the requested tolerance."""

    def __init__(self, message: str, estimate: float):
        super().__init__(f"{message} (achieved error estimate {estimate:.3e})")
        self.estimate = estimate


class TruncationError(CavityClockError, RuntimeError):
    """Symplectic residual of a truncated map exceeds the configured gate."""


class UnboundedVarianceError(CavityClockError, ValueError):
    """Zero Fisher information: the Cramér-Rao bound places no limit."""
