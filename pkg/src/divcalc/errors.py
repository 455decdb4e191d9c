"""Exceptions shared across the package."""


class DivcalcError(Exception):
    """Base class for package errors."""


class RingMismatchError(DivcalcError):
    """Operands live in different polynomial rings."""


class NotDivisibleError(DivcalcError):
    """Exact polynomial division has a nonzero remainder."""


class ScopeError(DivcalcError):
    """The request is outside the guaranteed scope of an operation."""


class ResourceBudgetExceeded(DivcalcError):
    """A configured step or retry budget was exhausted."""


class VerificationFailure(DivcalcError):
    """An identity that should hold exactly did not."""
