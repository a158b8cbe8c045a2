"""
Estimation error module.
Defines exceptions raised by the time-series and panel estimators.
"""

from typing import Any, Dict, Sequence

from .base import BaseError


class InsufficientDataError(BaseError):
    """Exception raised when too few usable rows remain after lagging and differencing."""

    def __init__(self, message="Insufficient data"):
        super().__init__(message, "INSUFFICIENT_DATA")


class DesignError(BaseError):
    """
    Exception raised when a design matrix is degenerate.

    Args:
        columns (Sequence[str]): Columns involved in the degeneracy.
        message (str | None): Error message.
    """

    def __init__(self, columns: Sequence[str], message: str | None = None):
        self.columns = list(columns)
        super().__init__(message or f"Collinear design columns: {', '.join(self.columns)}", "DESIGN_ERR")


class FitError(BaseError):
    """
    Exception raised when likelihood maximisation does not converge.

    Args:
        message (str): Error message.
        diagnostics (Dict[str, Any] | None): Best-so-far optimiser diagnostics.
    """

    def __init__(self, message="Fit did not converge", diagnostics: Dict[str, Any] | None = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message, "FIT_ERR")


class SelectionError(BaseError):
    """Exception raised when no candidate order converges during order selection."""

    def __init__(self, message="No candidate order converged"):
        super().__init__(message, "SELECTION_ERR")


class BuildError(BaseError):
    """
    Exception raised when a panel design is empty after masking.

    Args:
        drop_counts (Dict[str, int]): Rows dropped per country.
    """

    def __init__(self, drop_counts: Dict[str, int], message: str | None = None):
        self.drop_counts = dict(drop_counts)
        super().__init__(message or f"Design is empty after masking; dropped rows per country: {self.drop_counts}", "BUILD_ERR")


class RankDeficiencyError(BaseError):
    """
    Exception raised when regressors are linearly dependent after absorbing fixed effects.

    Args:
        columns (Sequence[str]): A minimal dependent set of column names.
    """

    def __init__(self, columns: Sequence[str]):
        self.columns = list(columns)
        super().__init__(f"Rank-deficient design; dependent columns: {', '.join(self.columns)}", "RANK_ERR")


class InferenceError(BaseError):
    """
    Exception raised when cluster-robust inference is not possible.

    Point estimates are still available through the `fit` attribute.

    Args:
        message (str): Error message.
        fit (Any): Fit object carrying point estimates and a NaN covariance.
    """

    def __init__(self, message="Cluster-robust inference unavailable", fit: Any = None):
        self.fit = fit
        super().__init__(message, "INFERENCE_ERR")


class CoefficientLookupError(BaseError):
    """Exception raised when a named coefficient is not part of a fit."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Coefficient '{name}' not found in fit", "LOOKUP_ERR")


class ComparisonError(BaseError):
    """Exception raised when schedules cannot be compared."""

    def __init__(self, message="Schedules are not comparable"):
        super().__init__(message, "COMPARE_ERR")
