"""Exception types shared across the package."""

from __future__ import annotations


class CongamesError(Exception):
    """Base class for all library errors."""


class InputError(CongamesError):
    """An argument does not meet an operation's precondition."""


class ResourceLimitError(CongamesError):
    """An enumeration exceeded the configured ceiling."""

    def __init__(self, what: str, limit: int):
        super().__init__(f"{what} exceeded the enumeration ceiling of {limit}")
        self.what = what
        self.limit = limit


class ConstructionError(CongamesError):
    """A construction produced something that is not an event structure."""


class FixpointError(CongamesError):
    """Recursion could not be resolved within the given fuel."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class DocumentError(CongamesError):
    """A document failed schema or validation checks.

    ``pointer`` is a JSON pointer into the offending document.
    """

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
        self.message = message
