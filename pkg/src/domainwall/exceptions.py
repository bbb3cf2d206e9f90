"""Exception types raised across the package."""


class DomainWallError(Exception):
    """Base class for all package errors."""


class DimensionError(DomainWallError, ValueError):
    """A spin assignment or matrix does not match the model it is used with."""


class SizeLimitError(DomainWallError, ValueError):
    """An exhaustive or dense computation would exceed its configured cap."""


class MappingError(DomainWallError, ValueError):
    """A qubit mapping is not injective or falls outside the index space."""


class DomainError(DomainWallError, ValueError):
    """A parameter lies outside the domain an operation is defined on."""


class AliasingError(DomainWallError, ValueError):
    """The same variable was passed where two distinct variables are required."""


class InfeasibleError(DomainWallError, ValueError):
    """The requested constraint system has no satisfying assignment."""
