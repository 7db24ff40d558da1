"""Exception hierarchy shared across the package."""

from __future__ import annotations


class FreePitError(Exception):
    """Base class for all errors raised by freepit."""


class FieldError(FreePitError, ValueError):
    """Invalid field parameters (composite characteristic, bad textual form, ...)."""


class FieldMismatchError(FreePitError, ValueError):
    """Operands live in different fields."""


class DimensionMismatchError(FreePitError, ValueError):
    pass


class SingularMatrixError(FreePitError, ArithmeticError):
    """Raised by mat_inv on a singular matrix.

    Callers doing randomized identity tests catch this and resample.
    """


class ParseError(FreePitError, ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class InversionHeightError(ParseError):
    """A negative exponent was applied to something other than a variable."""


class GuardExceeded(FreePitError):
    """Symbolic expansion grew past the degree or sparsity guard.

    This means the brute-force oracle is infeasible for the input, not that
    the input is malformed.
    """

    def __init__(self, kind: str, limit: int, actual: int):
        self.kind = kind
        self.limit = limit
        self.actual = actual
        super().__init__(f"{kind} guard exceeded: {actual} > {limit}")


class NotInImage(FreePitError, ValueError):
    """A commutative monomial is not the encoding of any reduced word."""


class InvalidAssignment(FreePitError, ValueError):
    pass


class InfeasibleError(FreePitError):
    """The requested computation cannot be carried out with the given field/bounds."""


class FieldTooSmallError(InfeasibleError):
    pass


class InterpolationError(FreePitError):
    """Recovered polynomial disagrees with the black box; the bounds were wrong."""
