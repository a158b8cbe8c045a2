"""
Base exception module.
Defines the root of the toolkit's exception hierarchy.
"""

from typing import Any, Dict


class BaseError(Exception):
    """
    Base class for all toolkit exceptions.

    Every subclass carries a short error code so the CLI can report a
    categorised failure and log it as a structured record.

    Args:
        message (str): Error message describing what went wrong.
        code (str, optional): Error code used to categorise the failure.
    """

    exit_status: int = 1

    def __init__(self, message: str = "Application error", code: str | None = None):
        self.message = message
        self.code = code
        super().__init__(self.message)

    def __str__(self) -> str:
        if self.code:
            return f"[{self.code}] {self.message}"
        return self.message

    def to_record(self) -> Dict[str, Any]:
        """
        Structured view of the error for JSON logs.

        Returns:
            Dictionary with the error class, code, message and any public
            attributes a subclass attached (column, line, countries, ...).
        """
        record: Dict[str, Any] = {"error": type(self).__name__, "code": self.code, "message": self.message}
        for key, value in vars(self).items():
            if key in ("message", "code", "fit") or key.startswith("_"):
                continue
            record[key] = value
        return record
