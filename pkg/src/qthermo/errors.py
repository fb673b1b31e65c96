"""Exception hierarchy.

Each category maps to one CLI exit code (see ``qthermo.cli``).
"""


class QThermoError(Exception):
    exit_code = 1


class InputValidationError(QThermoError, ValueError):
    """Malformed argument: wrong shape, unknown label, non-unitary input, ..."""

    exit_code = 2


class InvariantViolationError(QThermoError):
    """A physical invariant (PSD, completeness, ...) failed beyond numerical slack."""

    exit_code = 4


class NumericalConsistencyError(InvariantViolationError):
    pass


class EmptySubspaceError(InputValidationError):
    pass


class RangeError(InputValidationError):
    pass


class ConfigError(QThermoError):
    exit_code = 2


class CapViolationError(ConfigError):
    exit_code = 3


class OutputError(QThermoError, OSError):
    exit_code = 5


class ConfigFileError(ConfigError):
    """Config file missing or unreadable."""


class ConfigSyntaxError(ConfigError):
    """Config file is not a single well-formed JSON document."""


class UnknownKeyError(ConfigError):
    pass
