"""Exception types raised by spin_rwa."""


class SpinRWAError(Exception):
    """Base class for all package errors."""


class InvalidSpin(SpinRWAError, ValueError):
    """Spin value is negative or not a multiple of 1/2."""


class DegenerateField(SpinRWAError, ValueError):
    """Field configuration has no well-defined mixing angle (omega1 <= 0)."""


class NotNormalized(SpinRWAError, ValueError):
    """State vector norm deviates from 1 beyond tolerance."""


class StepTooLarge(SpinRWAError, ValueError):
    """Integrator step does not resolve the fastest phase of the problem."""


class UnknownScenario(SpinRWAError, KeyError):
    """Requested scenario id is not in the built-in table."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ConfigError(SpinRWAError, ValueError):
    """Malformed key=value configuration file or CLI argument."""
