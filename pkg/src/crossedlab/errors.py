"""Exception types shared across the laboratory.

Every guard in the package raises one of these rather than a bare
ValueError, so callers (and the CLI) can tell a structural mistake in the
inputs from a numerical precondition failure.
"""


class LabError(Exception):
    """Base class for all structured failures raised by this package."""


class DimensionMismatchError(LabError):
    """Operands live over matrix algebras of different sizes."""


class GridMismatchError(LabError):
    """Operands sampled on incompatible grids, or a transform whose
    frequency window does not cover the session grid."""


class DomainTruncationError(LabError):
    """A function carries non-negligible mass at the edge of the truncated
    line domain, so grid arithmetic would wrap it around spuriously."""


class MeanNotZeroError(LabError):
    """An antiderivative was requested for a function whose total mass is
    not negligible; the primitive would not stay in the class."""


class NotInIdealError(LabError):
    """Division by the coordinate difference was requested for a plane
    function that does not vanish on the diagonal."""


class BoundViolationError(LabError):
    """A measured norm exceeded the corresponding certified growth bound."""

    def __init__(self, message: str, worst: float | None = None):
        super().__init__(message)
        self.worst = worst


class ConfigError(LabError):
    """A config file could not be parsed into a valid laboratory setup."""
