"""Exception types shared across the library."""


class WoldlabError(Exception):
    """Base class for all library errors."""


class DomainError(WoldlabError, ValueError):
    """Input outside the mathematical domain of an operation."""


class DimensionError(WoldlabError, ValueError):
    """Shape or ambient-dimension mismatch."""


class ValidationError(WoldlabError, ValueError):
    """Malformed input (non-finite entries, bad parameters)."""


class PrecisionError(WoldlabError, RuntimeError):
    """A truncation cannot support the requested computation.

    Raised instead of returning silently degraded values; the message names
    the order or level that would be required.
    """


class PreconditionError(WoldlabError, RuntimeError):
    """A documented numerical precondition failed, with the measured residual."""


class SchemaError(WoldlabError, ValueError):
    """Configuration rejected, with the offending path in the message."""
