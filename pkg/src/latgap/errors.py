"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: InvalidInput -> 1,
BudgetExceeded -> 2, NotFoundWithinBounds -> 3.
"""


class LatgapError(Exception):
    """Base class for all package errors."""


class InvalidInput(LatgapError):
    """Arguments violate a documented precondition."""


class PreconditionViolated(InvalidInput):
    """A formula was requested outside its hypothesis range."""


class BudgetExceeded(LatgapError):
    """An enumeration would exceed the configured point budget."""


class NotPointed(LatgapError):
    """A generator set spans a cone with nontrivial lineality."""


class NotFoundWithinBounds(LatgapError):
    """A bounded search exhausted its range without an answer."""
