"""Exception hierarchy shared by every inkmux module.

The CLI maps each class to a fixed exit code, so new failure modes should
subclass the closest existing category rather than ``InkmuxError`` directly.
"""


class InkmuxError(Exception):
    """Base class for all library errors."""


class ParameterError(InkmuxError, ValueError):
    """An argument is outside the operation's domain."""


class CapacityError(ParameterError):
    """A factorization does not cover the requested nozzle count."""


class ConfigError(InkmuxError, ValueError):
    """A configuration value is malformed or violates an invariant."""


class ParseError(InkmuxError, ValueError):
    """Malformed input document. ``offset`` is the byte offset of the fault."""

    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)


class ElectricalFault(InkmuxError):
    """A drive condition that would damage the device, e.g. breakdown."""


class OrderingError(InkmuxError, ValueError):
    """A trace event was recorded earlier than the last recorded tick."""


class ConsistencyError(InkmuxError):
    """Tick-level simulation disagrees with the analytic schedule."""
