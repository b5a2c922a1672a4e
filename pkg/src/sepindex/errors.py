"""Shared exception types."""

from __future__ import annotations


class GuardExceeded(RuntimeError):
    """A configurable work cap was hit.

    Carries the guard's name so callers (and the CLI exit path) can say
    exactly which enumeration blew up instead of aborting opaquely.
    """

    def __init__(self, guard: str, detail: str):
        super().__init__(f"guard '{guard}' exceeded: {detail}")
        self.guard = guard
        self.detail = detail


class ParseError(ValueError):
    """Malformed user input, with the offending position when known."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"at position {position}: {message}"
        super().__init__(message)
        self.position = position
