"""
Validation error module.
Defines input, schema and domain validation exceptions.
"""

from .base import BaseError


class ValidationError(BaseError):
    """
    Exception raised when data or configuration validation fails.

    Args:
        message (str): Error message. Defaults to "Validation error".
        code (str): Error code. Defaults to "VAL_ERR".
    """

    def __init__(self, message="Validation error", code="VAL_ERR"):
        super().__init__(message, code)


class SchemaError(ValidationError):
    """
    Exception raised when a required logical column cannot be mapped to an input header.

    Args:
        column (str): Logical column name that is missing.
        message (str | None): Error message. Built from the column when None.
    """

    def __init__(self, column: str, message: str | None = None):
        self.column = column
        super().__init__(message or f"Required column '{column}' not found in input", "SCHEMA_ERR")


class RowParseError(ValidationError):
    """
    Exception raised when a row cannot be parsed (for example a malformed date).

    Args:
        line (int): 1-based line number in the source file, header included.
        message (str): Error message.
    """

    def __init__(self, line: int, message: str = "Row could not be parsed"):
        self.line = line
        super().__init__(f"line {line}: {message}", "ROW_PARSE_ERR")


class DomainError(ValidationError):
    """
    Exception raised when arguments fall outside the domain of a calculation.

    Args:
        message (str): Error message. Defaults to "Argument outside domain".
    """

    def __init__(self, message="Argument outside domain"):
        super().__init__(message, "DOMAIN_ERR")
