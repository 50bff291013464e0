"""Shared exception types."""


class ToolkitError(Exception):
    """Base class for everything this package raises on purpose."""


class InputError(ToolkitError):
    """Malformed or unusable input: files, formats, configs, bad argument values."""


class MetricPreconditionError(ToolkitError):
    """A metric's precondition does not hold for the given document or values."""
