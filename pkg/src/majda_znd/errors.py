"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class MajdaZNDError(Exception):
    """Base class for every error raised by this package."""


class AdmissibilityError(MajdaZNDError, ValueError):
    """Parameters do not describe an admissible strong detonation."""


class DomainError(MajdaZNDError, ValueError):
    """Argument outside the domain where a quantity is defined."""


class ConvergenceError(MajdaZNDError, RuntimeError):
    """Adaptive quadrature ran out of subdivision budget."""

    def __init__(self, message: str, worst_interval: tuple[float, float] | None = None):
        super().__init__(message)
        self.worst_interval = worst_interval


class StepSizeUnderflow(MajdaZNDError, RuntimeError):
    pass


class NonFiniteState(MajdaZNDError, RuntimeError):
    pass


class SingularityError(MajdaZNDError, ZeroDivisionError):
    pass


class DegenerateError(MajdaZNDError, ArithmeticError):
    pass


class GeometryError(MajdaZNDError, ValueError):
    pass


class RefinementExhausted(MajdaZNDError, RuntimeError):
    pass


class ZeroOnContour(MajdaZNDError, RuntimeError):
    def __init__(self, message: str, location: complex | None = None):
        super().__init__(message)
        self.location = location


class GridError(MajdaZNDError, ValueError):
    pass


class CflViolation(MajdaZNDError, RuntimeError):
    pass


class TruncationWarning(UserWarning):
    """Truncated shooting domain is short relative to the decay gap."""
