"""Exception hierarchy shared across the engine."""


class TempalignError(Exception):
    """Base class for all engine errors."""


class SchemaError(TempalignError):
    """Input file header or field set does not match the configured schema."""


class FormatError(TempalignError):
    """Input file is structurally malformed (empty, non-monotone years, ...)."""


class DataError(TempalignError):
    """Input file parses but contains invalid values (NaN, out of range)."""


class ConfigurationError(TempalignError):
    """Invalid configuration (shares not summing to 1, sigma < 0, ...)."""


class DomainError(TempalignError):
    """A numeric operation left its valid domain (log of non-positive, ...)."""


class ValidationError(TempalignError):
    """A domain object violates one of its invariants."""
