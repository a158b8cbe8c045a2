"""
Fixed-effects least squares with country-clustered covariance.

Country intercepts and country-specific trends are absorbed by projecting
each country's rows off its own [1, t, ..., t^k] block, which gives the same
slope coefficients and residuals as least squares with explicit dummy and
trend columns.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd

from ..data import dependent_columns
from ..error import CoefficientLookupError, InferenceError, RankDeficiencyError, ValidationError
from ..log import get_logger
from .design import PanelDesign
from .spec import PanelSpec
from .terms import Term, spec_terms

logger = get_logger(__name__)

_ABSORBED_TOL = 1e-10


@dataclass(frozen=True)
class PanelFit:
    """
    Fixed-effects regression estimates.

    Attributes:
        spec: Specification echo.
        names: Slope coefficient names.
        params: Slope coefficients.
        cov: Country-clustered covariance of ``params``.
        fixed_effects: Country -> [intercept, trend_1, ..., trend_k].
        residuals: Residual per design row.
        countries: Country per design row.
        dates: Date per design row.
        rows_per_country: Design rows per country.
        r2: R-squared of the full dummy-variable model.
        adj_r2: Adjusted R-squared of the full model.
        within_r2: R-squared after absorbing fixed effects and trends.
        n_absorbed: Absorbed intercept and trend columns.
        window: Estimation window.
    """

    spec: PanelSpec
    names: List[str]
    params: np.ndarray
    cov: np.ndarray
    fixed_effects: Dict[str, List[float]] = field(default_factory=dict)
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))
    countries: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=object))
    dates: pd.DatetimeIndex = field(default_factory=lambda: pd.DatetimeIndex([]))
    rows_per_country: Dict[str, int] = field(default_factory=dict)
    r2: float = float("nan")
    adj_r2: float = float("nan")
    within_r2: float = float("nan")
    n_absorbed: int = 0
    window: Tuple[str, str] | None = None

    @property
    def terms(self) -> List[Term]:
        return spec_terms(self.spec)

    @property
    def n_obs(self) -> int:
        return int(sum(self.rows_per_country.values()))

    @property
    def n_clusters(self) -> int:
        return sum(1 for count in self.rows_per_country.values() if count)

    @property
    def std_errors(self) -> np.ndarray:
        with np.errstate(invalid="ignore"):
            return np.sqrt(np.diag(self.cov))

    @property
    def obs_per_country(self) -> int:
        """Modal number of rows per country (largest mode on ties)."""
        counts = pd.Series([count for count in self.rows_per_country.values() if count])
        return int(counts.mode().max()) if len(counts) else 0

    def index(self, name: str) -> int:
        if name not in self.names:
            raise CoefficientLookupError(name)
        return self.names.index(name)

    def coefficient(self, name: str) -> Tuple[float, float]:
        """Estimate and cluster standard error of a named coefficient."""
        idx = self.index(name)
        return float(self.params[idx]), float(self.std_errors[idx])

    def to_record(self) -> Dict[str, Any]:
        """JSON-ready record; ``from_record`` restores the inference inputs."""
        return {
            "spec": self.spec.to_record(),
            "names": list(self.names),
            "params": self.params.tolist(),
            "cov": self.cov.tolist(),
            "fixed_effects": {code: list(values) for code, values in self.fixed_effects.items()},
            "rows_per_country": dict(self.rows_per_country),
            "obs_per_country": self.obs_per_country,
            "n_clusters": self.n_clusters,
            "n_obs": self.n_obs,
            "r2": self.r2,
            "adj_r2": self.adj_r2,
            "within_r2": self.within_r2,
            "n_absorbed": self.n_absorbed,
            "window": list(self.window) if self.window else None,
        }

    @classmethod
    def from_record(cls, record: Dict[str, Any]) -> "PanelFit":
        """
        Rebuild a fit from its record (residuals and row labels are not stored).

        Raises:
            ValidationError: If the record is incomplete or inconsistent.
        """
        try:
            spec = PanelSpec.model_validate(record["spec"])
            names = list(record["names"])
            params = np.asarray(record["params"], dtype=float)
            cov = np.asarray(record["cov"], dtype=float).reshape(len(names), len(names))
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"Invalid panel fit record: {e}") from e
        if len(params) != len(names):
            raise ValidationError("Panel fit record has mismatched names and params")
        window = record.get("window")
        return cls(
            spec=spec,
            names=names,
            params=params,
            cov=cov,
            fixed_effects={code: list(values) for code, values in record.get("fixed_effects", {}).items()},
            rows_per_country={code: int(count) for code, count in record.get("rows_per_country", {}).items()},
            r2=float(record.get("r2", np.nan)),
            adj_r2=float(record.get("adj_r2", np.nan)),
            within_r2=float(record.get("within_r2", np.nan)),
            n_absorbed=int(record.get("n_absorbed", 0)),
            window=tuple(window) if window else None,
        )


def cluster_covariance(x: np.ndarray, residuals: np.ndarray, clusters: Sequence, n_params: int | None = None, correction: bool = True) -> np.ndarray:
    """
    Cluster-robust sandwich covariance.

    (X'X)^-1 (sum_g X_g' e_g e_g' X_g) (X'X)^-1, scaled by
    G/(G-1) * (N-1)/(N-K) when ``correction`` is set.

    Args:
        x: Regressors (rows x K).
        residuals: Residual per row.
        clusters: Cluster label per row.
        n_params: K of the small-sample factor; defaults to the columns of ``x``.
        correction: Apply the finite-cluster correction.

    Returns:
        np.ndarray: K x K covariance.

    Raises:
        InferenceError: With fewer than two clusters.
    """
    x = np.asarray(x, dtype=float)
    residuals = np.asarray(residuals, dtype=float)
    n_rows, n_cols = x.shape
    scores = pd.DataFrame(x * residuals[:, None]).groupby(np.asarray(clusters), sort=True).sum().to_numpy()
    n_clusters = scores.shape[0]
    if n_clusters < 2:
        raise InferenceError(f"Cluster-robust covariance needs at least two clusters (got {n_clusters})")

    bread = np.linalg.inv(x.T @ x)
    covariance = bread @ (scores.T @ scores) @ bread
    if correction:
        k = n_cols if n_params is None else n_params
        covariance *= n_clusters / (n_clusters - 1) * (n_rows - 1) / (n_rows - k)
    # symmetrise rounding
    return (covariance + covariance.T) / 2.0


def _absorb(design: PanelDesign) -> Tuple[np.ndarray, np.ndarray, Dict[str, np.ndarray], int]:
    y_within = design.y.copy()
    x_within = design.x.copy()
    bases: Dict[str, np.ndarray] = {}
    n_absorbed = 0
    for code in design.country_order:
        rows = np.flatnonzero(design.countries == code)
        if rows.size == 0:
            continue
        basis = np.vander(design.time[rows], design.trend_degree + 1, increasing=True)
        stacked = np.column_stack([design.y[rows], design.x[rows]])
        coefs, *_ = np.linalg.lstsq(basis, stacked, rcond=None)
        projected = stacked - basis @ coefs
        y_within[rows] = projected[:, 0]
        x_within[rows] = projected[:, 1:]
        bases[code] = rows
        n_absorbed += int(np.linalg.matrix_rank(basis))
    return y_within, x_within, bases, n_absorbed


def fit_fe_ols(design: PanelDesign) -> PanelFit:
    """
    Least squares with absorbed country effects and trends, clustered by country.

    Args:
        design: Panel design.

    Returns:
        PanelFit: Slopes, clustered covariance and per-country effects.

    Raises:
        RankDeficiencyError: If regressors are collinear after absorption.
        InferenceError: With fewer than two countries; the exception's ``fit``
            holds the point estimates and a NaN covariance.
    """
    y_within, x_within, bases, n_absorbed = _absorb(design)

    # columns spanned by the country effects and trends
    absorbed = np.linalg.norm(x_within, axis=0) <= _ABSORBED_TOL * np.linalg.norm(design.x, axis=0)
    if absorbed.any():
        raise RankDeficiencyError([name for name, flag in zip(design.names, absorbed) if flag])

    involved = dependent_columns(x_within, design.names)
    if involved:
        raise RankDeficiencyError(involved)

    params, *_ = np.linalg.lstsq(x_within, y_within, rcond=None)
    residuals = y_within - x_within @ params

    fixed_effects: Dict[str, List[float]] = {}
    for code, rows in bases.items():
        basis = np.vander(design.time[rows], design.trend_degree + 1, increasing=True)
        coefs, *_ = np.linalg.lstsq(basis, design.y[rows] - design.x[rows] @ params, rcond=None)
        fixed_effects[code] = coefs.tolist()

    n_obs = design.n_obs
    n_total = len(params) + n_absorbed
    ssr = float(residuals @ residuals)
    sst = float(((design.y - design.y.mean()) ** 2).sum())
    within_sst = float(y_within @ y_within)
    r2 = 1.0 - ssr / sst if sst > 0 else float("nan")
    adj_r2 = 1.0 - (1.0 - r2) * (n_obs - 1) / (n_obs - n_total) if n_obs > n_total else float("nan")
    within_r2 = 1.0 - ssr / within_sst if within_sst > 0 else float("nan")

    fields = dict(
        spec=design.spec,
        names=list(design.names),
        params=params,
        fixed_effects=fixed_effects,
        residuals=residuals,
        countries=design.countries,
        dates=design.dates,
        rows_per_country=design.rows_per_country(),
        r2=r2,
        adj_r2=adj_r2,
        within_r2=within_r2,
        n_absorbed=n_absorbed,
        window=(str(design.window[0].date()), str(design.window[1].date())) if design.window else None,
    )
    try:
        cov = cluster_covariance(x_within, residuals, design.countries, n_params=n_total)
    except InferenceError as e:
        fit = PanelFit(cov=np.full((len(params), len(params)), np.nan), **fields)
        raise InferenceError(e.message, fit=fit) from e

    fit = PanelFit(cov=cov, **fields)
    logger.info("Panel fit", extra={"spec": design.spec.label(), "rows": n_obs, "clusters": fit.n_clusters, "r2": r2, "within_r2": within_r2})
    return fit
