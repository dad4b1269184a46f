"""Exception types shared across the package."""


class PrismError(Exception):
    """Base class for all errors raised by prismcanon."""


class InvalidArgument(PrismError, ValueError):
    pass


class DegenerateInput(PrismError, ValueError):
    """Input is well-formed but the requested view is undefined (e.g. isolated vertex)."""


class NumericFailure(PrismError, ArithmeticError):
    pass


class NotApplicable(PrismError):
    """A fast path cannot be used on this input; fall back to the general routine."""


class ResourceLimit(PrismError):
    pass


class InternalError(PrismError, RuntimeError):
    """A contract that should hold by construction was violated."""
