"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class StableMapError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(StableMapError):
    """A state violates one of the model invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class ParseError(StableMapError):
    """Malformed state or plan text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(StableMapError):
    """A transition guard failed at the requested site."""


class SiteReferenceError(StableMapError):
    """A site names a surface or circuit that does not exist."""


class DomainError(StableMapError):
    """An operation was called outside the domain where it is defined."""
