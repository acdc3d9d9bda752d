"""Exception hierarchy shared across the pipeline.

The CLI maps these onto exit codes: ConfigError -> 1, DataError (and its
subclasses) -> 2, TransportError -> 3.
"""


class UdlError(Exception):
    """Base class for all pipeline errors."""


class ConfigError(UdlError):
    """Invalid configuration: bad flag values, missing backends, unknown keys."""


class DataError(UdlError):
    """Problem with input data files or their contents."""


class ParseError(DataError):
    """A line or row could not be parsed; message carries the location."""


class ValidationError(DataError):
    """Parsed data violates an invariant (duplicate ids, bad grades, ...)."""


class FormatError(DataError):
    """A file does not follow its declared layout (missing header, dim mismatch)."""


class CoverageError(DataError):
    """A required id is missing from an embeddings file or vector map."""


class TransportError(UdlError):
    """A remote backend was unreachable or answered with an error."""
