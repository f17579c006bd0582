"""Exception types shared across the laboratory.

The CLI maps these onto exit codes: :class:`InvalidArgument` to 2 and
:class:`OutOfRange` to 3.
"""


class WGLabError(Exception):
    """Base class for all library errors."""


class InvalidArgument(WGLabError, ValueError):
    """A parameter violates an operation's precondition."""


class OutOfRange(WGLabError, IndexError):
    """A request reaches beyond the limit of a precomputed table."""


class DependencyError(WGLabError, LookupError):
    """A coefficient function is undefined at a prime the sum needs."""


class UndefinedResult(WGLabError, ArithmeticError):
    """A ratio has a zero denominator."""
