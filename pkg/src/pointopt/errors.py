"""Exception types shared across the package."""


class PointOptError(Exception):
    """Base class for all package errors."""


class DomainError(PointOptError, ValueError):
    """An argument lies outside the domain of a kernel or special function."""


class PoleError(DomainError):
    """The positive-energy loop kernel was evaluated too close to an integer k."""


class ArgumentError(PointOptError, ValueError):
    """Malformed or mutually inconsistent arguments."""


class UnsupportedConfigurationError(ArgumentError):
    """Requested a sharp sphere configuration that does not exist."""


class SamplingError(PointOptError, RuntimeError):
    """Random configuration sampling kept violating the minimum-gap floor."""


class NoBoundStateError(PointOptError, RuntimeError):
    """The secular equation has no root in the admissible range."""

    def __init__(self, message, scanned=None):
        super().__init__(message)
        self.scanned = scanned


class SolverError(PointOptError, RuntimeError):
    """A root finder failed to bracket or converge."""
