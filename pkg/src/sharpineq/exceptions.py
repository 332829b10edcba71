"""Exception hierarchy shared across the package."""


class SharpIneqError(Exception):
    """Base class for all package errors."""


class DomainError(SharpIneqError, ValueError):
    """A parameter lies outside the hypotheses of the selected inequality."""


class NumericalError(SharpIneqError, ArithmeticError):
    """Base class for failures of a numerical routine."""


class ToleranceNotMet(NumericalError):
    """Adaptive refinement exhausted its budget before reaching tolerance."""


class NonFinite(NumericalError):
    """An integrand produced a non-finite value inside the domain."""


class NonConvergence(NumericalError):
    """An optimizer exhausted its evaluation budget."""


class NoFeasiblePoint(NumericalError):
    """An objective is +inf everywhere the search looked."""


class IntegrabilityError(NumericalError):
    """A weighted integrand is not integrable at the origin for the profile."""


class RatioExceedsOne(SharpIneqError):
    """A verification produced lhs > constant * rhs."""
