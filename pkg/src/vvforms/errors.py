"""Exception hierarchy shared by every layer of the package."""

from __future__ import annotations


class FormError(ValueError):
    """Base class for all domain errors raised by vvforms."""


class ChartMismatch(FormError):
    pass


class AxisOutOfRange(FormError):
    pass


class UnsupportedSubstitution(FormError):
    pass


class DegreeOutOfRange(FormError):
    pass


class NotTraceless(FormError):
    pass


class NotClosed(FormError):
    pass


class NotExact(FormError):
    pass


class NotCocycle(FormError):
    pass


class ArityMismatch(FormError):
    pass


class DegreeInconsistent(FormError):
    pass


class NotInverse(FormError):
    pass


class NotUnimodular(FormError):
    pass


class MixedKind(FormError):
    pass


class DegreeMismatch(FormError):
    pass


class UnknownSuite(FormError):
    pass


class InvalidStructure(FormError):
    """Structure constants that violate antisymmetry, Jacobi or the module law."""


class FormSyntaxError(FormError):
    """Parse failure with a 1-based source position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class InvariantBreach(AssertionError):
    """An identity that must always hold was observed to fail."""
