"""Exception hierarchy shared across the package.

``DomainError`` covers mathematically meaningful rejections (CLI exit
code 1); ``InputError`` covers malformed input and resource budgets (CLI
exit code 2).  ``field`` optionally records the offending input path, e.g.
``subgroups[2][0]``.
"""

from __future__ import annotations


class PdceError(Exception):
    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(message if field is None else f"{field}: {message}")


class DomainError(PdceError):
    """A well-formed request whose answer is a refusal."""


class InputError(PdceError):
    """Malformed input, or a computation exceeding its configured budget."""


class CompositionNotZero(DomainError):
    """Homology requested for a pair of maps that do not compose to zero."""


class SpaceMismatch(DomainError):
    """Two function vectors live on different spaces."""


class ParentMismatch(DomainError):
    """Subgroup operation across different ambient groups."""


class NotASolution(DomainError):
    """A function claimed to solve a difference equation does not."""


class WrongTarget(DomainError):
    """Operation requires a different value target."""


class NotBounded(DomainError):
    """A disk-valued function exceeds the unit disk."""


class RoundingAmbiguous(DomainError):
    """A constraint value sits too close to a half-integer to round safely."""


class BudgetExceeded(InputError):
    """Matrix assembly would exceed the configured row budget."""


class ProductTooLarge(InputError):
    """Materializing a product group would exceed the configured budget."""


class ParseError(InputError):
    """An instance or report file failed validation."""


class UnknownExample(InputError):
    """No built-in example under the requested name."""
