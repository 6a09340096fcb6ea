"""Exception hierarchy with stable error codes used by the CLI."""

from __future__ import annotations


class SkolemError(Exception):
    """Base class; ``code`` is the stable machine-readable identifier."""

    code = "error"


class DomainError(SkolemError, ValueError):
    """Input outside the mathematical domain of an operation."""

    code = "domain-error"


class PrecisionExhausted(SkolemError):
    """A certified answer needs more precision than the configured ceiling."""

    code = "precision-exhausted"


class BudgetExceeded(SkolemError):
    """Exact evaluation would exceed the configured bit budget."""

    code = "budget-exceeded"


class ConfigurationError(SkolemError):
    """A required configuration value is missing or malformed."""

    code = "configuration-error"


class InternalError(SkolemError):
    """An invariant that should be impossible to violate was violated."""

    code = "internal-error"


class ParseError(SkolemError):
    """Problem file could not be parsed; ``offset`` is a byte offset or None."""

    code = "parse-error"

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)
