"""Exception hierarchy shared by all modules."""


class FramingError(Exception):
    """Base class for errors raised by this package."""


class StructuralError(FramingError):
    """Per-vertex edge orders disagree with edge endpoints."""


class InvalidInput(FramingError):
    """An argument violates an operation's precondition."""


class LimitExceeded(FramingError):
    """An enumeration produced more objects than the caller allowed."""


class InternalInvariantViolated(FramingError):
    """A guaranteed structural property failed; indicates a bug."""
