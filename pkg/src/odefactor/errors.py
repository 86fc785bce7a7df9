"""Exception types shared across the package."""


class OdeFactorError(Exception):
    """Base class for all errors raised by odefactor."""


class InvalidParam(OdeFactorError, ValueError):
    """A parameter violates the admissibility constraints of a family or operation."""


class DomainError(OdeFactorError, ValueError):
    """Evaluation requested outside the real, finite domain of an expression."""


class ComplexRootsError(InvalidParam):
    """A fitting quadratic has no real roots, so no real factorization exists."""


class DiscriminantError(InvalidParam):
    """The cubic force has a non-positive discriminant B^2 - 4AC."""


class OutOfRangeError(OdeFactorError, ValueError):
    """A target value lies outside the image of a monotone map."""


class NonMonotonicError(OdeFactorError):
    """A bracket fails its monotonicity pre-scan."""


class BlowUpError(OdeFactorError, ArithmeticError):
    """An integrated trajectory escaped past the blow-up guard."""
