"""Exception hierarchy shared by every evaluator."""

from __future__ import annotations


class NucratesError(Exception):
    """Base class for all errors raised by this package."""


class MissingField(NucratesError, ValueError):
    """An integral kind needs an optional field that was not supplied."""


class DomainError(NucratesError, ValueError):
    """A parameter lies outside the domain where the integral is defined."""


class PoleError(DomainError):
    """Gamma function evaluated at a nonpositive integer."""


class DegenerateParam(DomainError):
    """A hypergeometric denominator parameter is a nonpositive integer."""


class DivergenceError(NucratesError, ArithmeticError):
    """Argument outside the radius of convergence of a series."""


class NonConvergence(NucratesError, ArithmeticError):
    """An iterative scheme exhausted its budget above tolerance.

    ``partial`` carries the best available :class:`EvalResult`, if any.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class DegenerateNu(NucratesError, ArithmeticError):
    """Integer or half-integer exponent: the residue series has double poles."""


class CancellationError(NucratesError, ArithmeticError):
    """An alternating reduction series is too ill-conditioned to sum."""


class OutOfRegime(NucratesError, ValueError):
    """An asymptotic form was requested outside its regime of validity."""
