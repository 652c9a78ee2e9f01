"""Exception hierarchy shared by every module."""

from __future__ import annotations


class ToricNashError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ToricNashError, ValueError):
    """Input violates a documented precondition."""


class CapExceeded(ToricNashError):
    """An enumeration or iteration exceeded its configured cap."""

    def __init__(self, message: str, *, cap: int, attempted: int | None = None) -> None:
        super().__init__(message)
        self.cap = cap
        self.attempted = attempted


class ResolutionCapExceeded(CapExceeded):
    """Resolution did not finish within the subdivision cap.

    The partially refined fan is kept on ``partial`` for inspection.
    """

    def __init__(self, message: str, *, cap: int, partial: object) -> None:
        super().__init__(message, cap=cap)
        self.partial = partial
