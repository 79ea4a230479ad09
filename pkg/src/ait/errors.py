"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: config problems -> 2, data problems -> 3,
numeric failures -> 4.
"""


class AitError(Exception):
    """Base class for all package errors."""


class ShapeError(AitError):
    """Operand shapes are incompatible; message names both shapes."""


class ParameterError(AitError):
    """A scalar argument is out of its valid range."""


class CapacityError(ParameterError):
    """A bottleneck capacity exceeds the available pool."""


class ConfigError(AitError):
    """Invalid or contradictory configuration."""


class DataError(AitError):
    """Malformed dataset file or unreachable data."""


class NumericError(AitError):
    """Non-finite values or a diverging computation."""
