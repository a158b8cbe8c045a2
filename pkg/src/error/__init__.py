"""
Custom exceptions module.
Imports and exports all custom error classes.
"""

from .base import BaseError
from .validation import ValidationError, SchemaError, RowParseError, DomainError
from .resource import NotFoundError
from .ingest import ImputationError, MetadataError, AssemblyError
from .estimation import (
    InsufficientDataError,
    DesignError,
    FitError,
    SelectionError,
    BuildError,
    RankDeficiencyError,
    InferenceError,
    CoefficientLookupError,
    ComparisonError,
)
from .simulation import SimulationError, SummaryError
from .service import ConfigurationError, ReproducibilityError

__all__ = [
    "BaseError",
    "ValidationError",
    "SchemaError",
    "RowParseError",
    "DomainError",
    "NotFoundError",
    "ImputationError",
    "MetadataError",
    "AssemblyError",
    "InsufficientDataError",
    "DesignError",
    "FitError",
    "SelectionError",
    "BuildError",
    "RankDeficiencyError",
    "InferenceError",
    "CoefficientLookupError",
    "ComparisonError",
    "SimulationError",
    "SummaryError",
    "ConfigurationError",
    "ReproducibilityError",
]
