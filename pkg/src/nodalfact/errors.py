"""Exception types shared across the package."""

from .scalar import DivisionByZero, FieldMismatch


class EmptySet(ValueError):
    pass


class DuplicatePoint(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """Exhaustive enumeration would exceed the configured subset budget."""


class GenericityFailure(RuntimeError):
    """Random retries did not produce an object satisfying its validity predicate."""


class PointOnCenter(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class EqualPoints(ValueError):
    pass


class ZeroForm(ValueError):
    pass


class FieldTooLarge(ValueError):
    pass


class ParseError(ValueError):
    pass


class InvariantViolation(ValueError):
    def __init__(self, message: str, label: str | None = None):
        super().__init__(message)
        self.label = label


class NotSeparable(ValueError):
    """The point's vanishing condition depends on the others at this degree."""


class PreconditionViolation(ValueError):
    pass


__all__ = [
    "BudgetExceeded",
    "DimensionMismatch",
    "DivisionByZero",
    "DuplicatePoint",
    "EmptySet",
    "EqualPoints",
    "FieldMismatch",
    "FieldTooLarge",
    "GenericityFailure",
    "InvariantViolation",
    "NotSeparable",
    "ParseError",
    "PointOnCenter",
    "PreconditionViolation",
    "ZeroForm",
]
