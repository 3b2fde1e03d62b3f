"""Exception hierarchy shared across the package."""


class KacLabError(Exception):
    """Base class for all kaclab errors."""


class ParameterError(KacLabError, ValueError):
    """An argument violates a documented precondition."""


class DomainError(KacLabError, ValueError):
    """A point lies outside the domain where a quantity is defined."""


class NumericError(KacLabError, ArithmeticError):
    """A numerical procedure failed (factorization, convergence, ...)."""


class QuadratureError(NumericError):
    """Adaptive quadrature missed its tolerance.

    The best available estimate is kept on ``estimate`` and the reported
    error on ``abserr``.
    """

    def __init__(self, message, estimate=float("nan"), abserr=float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.abserr = abserr


class UndefinedBoundError(NumericError):
    """The Jensen bound is undefined (polynomial vanishes on the disk)."""
