"""
Regression design of the per-country ARIMA-X model.

The outcome is the first difference of log daily new cases (or deaths) per
million; regressors are first differences of vaccination coverage, log tests,
policy and mobility, each at a fixed lag, plus the weekend dummy in levels.
Row t only uses data dated <= t.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Literal, Mapping, get_args

import numpy as np
import pandas as pd

from ..data import difference, floored_log, shift
from ..error import InsufficientDataError, ValidationError
from ..ingest import ObservationPanel
from ..log import get_logger

logger = get_logger(__name__)

OUTCOME = Literal["cases", "deaths"]
_valid_outcomes = get_args(OUTCOME)

MIN_USABLE_ROWS = 60

# regressor -> lag in days
CASE_LAGS: Dict[str, int] = {"v1": 21, "v2": 7, "v": 21, "tests": 0, "weekend": 0, "policy": 14, "mobility": 14}
DEATH_LAGS: Dict[str, int] = {"v1": 35, "v2": 21, "v": 35, "weekend": 0, "policy": 28, "mobility": 28}

_SOURCES = {
    "v1": "v1",
    "v2": "v2",
    "v": "total_doses",
    "weekend": "weekend",
    "policy": "policy",
    "mobility": "mobility_index",
}

_LABELS = {"v1": "dV1", "v2": "dV2", "v": "dV", "tests": "dlogT", "weekend": "Wkd", "policy": "dP", "mobility": "dM"}
LEVEL_TERMS = frozenset({"weekend"})


def default_lags(outcome: OUTCOME) -> Dict[str, int]:
    """Default regressor lags for an outcome."""
    return dict(CASE_LAGS if outcome == "cases" else DEATH_LAGS)


def term_name(term: str, lag: int) -> str:
    """Column label such as ``dV1_l21`` or ``dlogT``."""
    return _LABELS[term] if lag == 0 else f"{_LABELS[term]}_l{lag}"


@dataclass(frozen=True)
class TsDesign:
    """
    Design of one country's ARIMA-X regression.

    Attributes:
        country: Country identifier.
        outcome: "cases" or "deaths".
        dates: Row dates (contiguous days).
        y: Differenced log outcome; NaN on excluded interior rows.
        exog: Regressor matrix (rows x columns), zero on excluded rows.
        exog_names: Column names; the first is ``const``.
        log_level: Log outcome level at each row date.
        log_level_prev: Log outcome level on the day before each row.
        valid: Rows entering the likelihood.
        lags: Lag of each regressor term.
        excluded_rows: Window rows left out (trimmed or interior missing).
        floored_rows: Count cells raised to the log floor.
    """

    country: str
    outcome: OUTCOME
    dates: pd.DatetimeIndex
    y: np.ndarray
    exog: np.ndarray
    exog_names: List[str]
    log_level: np.ndarray
    log_level_prev: np.ndarray
    valid: np.ndarray
    lags: Dict[str, int] = field(default_factory=dict)
    excluded_rows: int = 0
    floored_rows: int = 0

    @property
    def n_obs(self) -> int:
        return int(self.valid.sum())

    @property
    def has_missing(self) -> bool:
        return not bool(self.valid.all())

    def with_outcome_shift(self, constant: float) -> "TsDesign":
        """Copy whose log outcome is shifted by a constant before differencing."""
        level = self.log_level + constant
        prev = self.log_level_prev + constant
        y = np.where(self.valid, level - prev, np.nan)
        return TsDesign(**{**self.__dict__, "y": y, "log_level": level, "log_level_prev": prev})

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.exog, columns=self.exog_names)
        frame.insert(0, "y", self.y)
        frame.insert(0, "date", self.dates)
        frame["valid"] = self.valid
        return frame


def series_design(
    y: np.ndarray,
    exog: np.ndarray | None = None,
    exog_names: List[str] | None = None,
    country: str = "SIM",
    outcome: OUTCOME = "cases",
    start: str = "2021-01-01",
) -> TsDesign:
    """
    Wrap an already differenced outcome and regressors in a design.

    A ``const`` column is prepended; NaN outcome values mark missing rows.
    Levels are re-integrated from zero.
    """
    y = np.asarray(y, dtype=float)
    n = len(y)
    x = np.ones((n, 1))
    names = ["const"]
    if exog is not None:
        exog = np.asarray(exog, dtype=float).reshape(n, -1)
        x = np.column_stack([x, exog])
        names += list(exog_names or [f"x{idx + 1}" for idx in range(exog.shape[1])])

    valid = np.isfinite(y) & np.isfinite(x).all(axis=1)
    level = np.cumsum(np.where(valid, y, 0.0))
    return TsDesign(
        country=country,
        outcome=outcome,
        dates=pd.date_range(start, periods=n, freq="D"),
        y=np.where(valid, y, np.nan),
        exog=np.where(valid[:, None], x, 0.0),
        exog_names=names,
        log_level=level,
        log_level_prev=np.concatenate([[0.0], level[:-1]]),
        valid=valid,
    )


def _vaccine_terms(panel: ObservationPanel, row: int) -> List[str]:
    v1 = panel.values("v1")[row]
    v2 = panel.values("v2")[row]
    total = panel.values("total_doses")[row]
    if np.isfinite(v1).any() and np.isfinite(v2).any():
        return ["v1", "v2"]
    if np.isfinite(total).any():
        return ["v"]
    return ["v1", "v2"]


def build_ts_design(
    panel: ObservationPanel,
    country: str,
    outcome: OUTCOME = "cases",
    lag_overrides: Mapping[str, int] | None = None,
    min_rows: int = MIN_USABLE_ROWS,
) -> TsDesign:
    """
    Build the differenced ARIMA-X design for one country.

    Rows cover the panel's study window; lead-in history is used for lags.
    Leading and trailing rows with missing entries are trimmed, interior
    ones are kept as missing observations. Counts below 0.5 are floored
    before logs. Countries without separate first/second-dose series use
    total doses per hundred (term ``v``).

    Args:
        panel: Daily observation panel.
        country: Country name or identifier.
        outcome: "cases" or "deaths". The deaths design uses lags 14 days
            later and no test term.
        lag_overrides: Lags replacing the defaults, keyed by term
            (v1, v2, v, tests, weekend, policy, mobility).
        min_rows: Minimum usable rows.

    Returns:
        TsDesign: Design with a ``const`` column first.

    Raises:
        ValidationError: On a weekly panel, unknown outcome or term, or negative lag.
        InsufficientDataError: If fewer than ``min_rows`` usable rows remain.
    """
    if outcome not in _valid_outcomes:
        raise ValidationError(f"Invalid outcome: {outcome}. Must be one of {_valid_outcomes}")
    if panel.frequency != "daily":
        raise ValidationError("Time-series designs need a daily panel")

    lags = default_lags(outcome)
    for term, lag in (lag_overrides or {}).items():
        if term not in _LABELS or (term == "tests" and outcome == "deaths"):
            raise ValidationError(f"Unknown lag term '{term}' for outcome '{outcome}'")
        if lag < 0:
            raise ValidationError(f"Lag of '{term}' must be non-negative")
        lags[term] = int(lag)

    row = panel.country_index(country)
    code = panel.countries[row]
    flow = panel.values("new_cases_pm" if outcome == "cases" else "new_deaths_pm")[row]
    log_level, floored = floored_log(flow)

    terms = [*_vaccine_terms(panel, row)]
    if outcome == "cases":
        terms.append("tests")
    terms += ["weekend", "policy", "mobility"]

    columns = [np.ones(len(panel.dates))]
    names = ["const"]
    for term in terms:
        if term == "tests":
            series, floored_tests = floored_log(panel.values("new_tests")[row])
            floored += floored_tests
        else:
            series = panel.values(_SOURCES[term])[row]
        columns.append(shift(series if term in LEVEL_TERMS else difference(series), lags[term]))
        names.append(term_name(term, lags[term]))

    x_all = np.column_stack(columns)
    y_all = difference(log_level)
    prev_all = shift(log_level, 1)

    in_window = panel.dates >= panel.window_start
    complete = in_window & np.isfinite(y_all) & np.isfinite(x_all).all(axis=1)
    if not complete.any():
        raise InsufficientDataError(f"{code} {outcome}: no usable rows")

    first, last = np.flatnonzero(complete)[[0, -1]]
    rows = slice(first, last + 1)
    valid = complete[rows]
    x = np.where(valid[:, None], x_all[rows], 0.0)
    y = np.where(valid, y_all[rows], np.nan)
    excluded = int(in_window.sum() - valid.sum())

    if valid.sum() < min_rows:
        raise InsufficientDataError(f"{code} {outcome}: {int(valid.sum())} usable rows after lagging, need {min_rows}")

    design = TsDesign(
        country=code,
        outcome=outcome,
        dates=panel.dates[rows],
        y=y,
        exog=x,
        exog_names=names,
        log_level=log_level[rows],
        log_level_prev=prev_all[rows],
        valid=valid,
        lags={term: lags[term] for term in terms},
        excluded_rows=excluded,
        floored_rows=floored,
    )
    logger.info("Time-series design built", extra={"country": code, "outcome": outcome, "rows": design.n_obs, "excluded_rows": excluded, "floored_rows": floored})
    return design
