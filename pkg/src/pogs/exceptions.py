"""Exception hierarchy shared by all pogs modules."""


class PogsError(Exception):
    """Base class for every error raised by pogs."""


class DomainError(PogsError, ValueError):
    """An argument lies outside the domain of an operation."""


class InvalidPatternError(DomainError):
    """A group pattern cannot be built from the requested layout."""


class OutOfTableError(DomainError):
    """A (m, n1) pair has no entry in the lambda multiplier table."""


class ParseError(PogsError, ValueError):
    """A signal or metadata file could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class MissingMetadataError(PogsError, ValueError):
    """Required metadata (e.g. sampling rate) was not found."""


class ConvexityWarning(UserWarning):
    """The non-convexity parameter exceeds the bound guaranteeing a convex objective."""
