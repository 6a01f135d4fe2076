"""Exception types raised by the verification engine."""


class TVHPError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(TVHPError, ValueError):
    """A parameter lies outside the region where a closed form is defined."""


class NonCommutingArguments(TVHPError, ValueError):
    """Operator arguments substituted into a polynomial do not commute."""


class NegativePowerSurvives(TVHPError, ArithmeticError):
    """A Laurent coefficient that must cancel is nonzero."""


class TailTooLarge(TVHPError, ValueError):
    """The Fock cutoff is too small for the requested tail tolerance."""


class CutoffViolation(TVHPError, ValueError):
    """An operator is too long to act faithfully below the Fock cutoff."""
