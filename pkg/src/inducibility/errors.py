"""Exception types shared across the package."""


class InducibilityError(Exception):
    """Base class for all errors raised by this package."""


class TreeSyntaxError(InducibilityError, ValueError):
    """Malformed bracket-format tree text."""


class ArityError(InducibilityError, ValueError):
    """An internal node has fewer than 2 or more than d children."""


class DomainError(InducibilityError, ValueError):
    """Arguments outside the domain of an operation."""


class CapExceeded(InducibilityError, RuntimeError):
    """A configured enumeration or subset cap would be exceeded."""
