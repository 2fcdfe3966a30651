"""Exception hierarchy shared by all rmflab modules."""


class RmfError(Exception):
    """Base class for domain errors raised by rmflab."""


class InvalidArgument(RmfError, ValueError):
    """An argument violates an operation's precondition."""


class ResourceLimit(RmfError, RuntimeError):
    """A request would exceed a documented size or memory cap."""


class UnreachableTarget(RmfError, ValueError):
    """Sign steering cannot reach the requested target with the available primes."""


class UnsupportedModel(InvalidArgument):
    """The operation is not defined for the given model."""
