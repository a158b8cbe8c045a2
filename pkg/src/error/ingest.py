"""
Ingest error module.
Defines exceptions raised while imputing series and assembling panels.
"""

from typing import Sequence

from .base import BaseError


class ImputationError(BaseError):
    """
    Exception raised when a series cannot be imputed.

    Args:
        message (str): Error message. Defaults to "Imputation error".
    """

    def __init__(self, message="Imputation error"):
        super().__init__(message, "IMPUTE_ERR")


class MetadataError(BaseError):
    """
    Exception raised when country metadata is unknown.

    Args:
        country (str): Country name or identifier that failed to resolve.
        message (str | None): Error message. Built from the country when None.
    """

    def __init__(self, country: str, message: str | None = None):
        self.country = country
        super().__init__(message or f"Unknown country '{country}'", "META_ERR")


class AssemblyError(BaseError):
    """
    Exception raised when requested countries are absent from every input table.

    Args:
        countries (Sequence[str]): Countries that could not be found.
    """

    def __init__(self, countries: Sequence[str]):
        self.countries = list(countries)
        super().__init__(f"Countries absent from all inputs: {', '.join(self.countries)}", "ASSEMBLY_ERR")
