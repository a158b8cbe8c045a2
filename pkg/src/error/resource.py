"""
Resource error module.
Defines exceptions for missing input files and bundled resources.
"""

from pathlib import Path

from .base import BaseError


class NotFoundError(BaseError):
    """
    Exception raised when an input file or bundled resource does not exist.

    Args:
        path (str | Path): Location that was looked up.
        message (str | None): Error message. Defaults to "File not found: <path>".
    """

    def __init__(self, path: str | Path, message: str | None = None):
        self.path = Path(path).as_posix()
        super().__init__(message or f"File not found: {self.path}", "NOT_FOUND")
