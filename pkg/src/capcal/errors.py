"""Exception types shared across the toolkit.

The CLI maps these onto exit codes: data-format problems exit 2,
validation findings exit 1, network failures exit 3.
"""


class CapcalError(Exception):
    """Base class for all toolkit errors."""


class DataFormatError(CapcalError):
    """A manifest, record stream, store or score file is malformed."""


class NetworkError(CapcalError):
    """A service client failed after exhausting its retry budget."""
