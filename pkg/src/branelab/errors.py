"""Exception types raised across the package."""

__all__ = [
    "BranelabError",
    "DomainError",
    "DegenerateGeometryError",
    "UnsupportedConfigurationError",
    "ParameterError",
    "PreconditionError",
]


class BranelabError(Exception):
    """Base class for all package errors."""


class DomainError(BranelabError):
    """A coordinate or evaluation point lies outside the valid chart."""


class DegenerateGeometryError(BranelabError):
    """The induced geometry is singular (degenerate metric, null normal...)."""


class UnsupportedConfigurationError(BranelabError):
    """The requested combination of model/background/embedding is not supported."""


class ParameterError(BranelabError):
    """A user-supplied parameter is malformed or out of range."""


class PreconditionError(BranelabError):
    """An input object does not satisfy a required structural property."""
