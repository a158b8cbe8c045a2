"""
Service error module.
Defines configuration and reproducibility exceptions.
"""

from pathlib import Path

from .base import BaseError


class ConfigurationError(BaseError):
    """
    Exception raised when there is a configuration error.

    Args:
        message (str): Error message. Defaults to "Configuration error".
        code (str): Error code. Defaults to "CONFIG_ERR".
    """

    def __init__(self, message="Configuration error", code="CONFIG_ERR"):
        super().__init__(message, code)


class ReproducibilityError(BaseError):
    """
    Exception raised when a replayed run does not match its manifest.

    Args:
        path (str | Path): File whose digest did not match.
        message (str | None): Error message.
    """

    def __init__(self, path: str | Path, message: str | None = None):
        self.path = str(path)
        super().__init__(message or f"Digest mismatch for '{self.path}'", "REPRO_ERR")
