"""
Stacked country x period design of the fixed-effects regressions.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd

from ..data import rolling_sum
from ..error import BuildError, ValidationError
from ..ingest import ObservationPanel, country_meta, weekly_aggregate
from ..log import get_logger
from .spec import PanelSpec
from .terms import WEEK_DAYS, Term, outcome_term, spec_terms

logger = get_logger(__name__)


@dataclass(frozen=True)
class PanelDesign:
    """
    Regression rows of one specification.

    Attributes:
        spec: Specification.
        terms: Regressor terms, aligned with ``names``.
        names: Regressor column names.
        y: Outcome per row.
        x: Regressor matrix (rows x terms).
        countries: Cluster label (country) per row.
        dates: Date per row.
        time: Trend variable per row, scaled to [0, 1] over the window.
        country_order: Countries in panel order.
        drop_counts: Window rows dropped per country.
        nonpositive_counts: Window rows per country masked for a non-positive weekly count.
        window: Estimation window (first, last period date).
    """

    spec: PanelSpec
    terms: List[Term]
    names: List[str]
    y: np.ndarray
    x: np.ndarray
    countries: np.ndarray
    dates: pd.DatetimeIndex
    time: np.ndarray
    country_order: Tuple[str, ...]
    drop_counts: Dict[str, int] = field(default_factory=dict)
    nonpositive_counts: Dict[str, int] = field(default_factory=dict)
    window: Tuple[pd.Timestamp, pd.Timestamp] | None = None

    @property
    def n_obs(self) -> int:
        return len(self.y)

    @property
    def trend_degree(self) -> int:
        return self.spec.trend_degree

    def rows_per_country(self) -> Dict[str, int]:
        counts = pd.Series(self.countries).value_counts()
        return {code: int(counts.get(code, 0)) for code in self.country_order}

    def dummy_block(self) -> Tuple[np.ndarray, List[str]]:
        """Country dummies (rows x countries with rows)."""
        present = [code for code in self.country_order if (self.countries == code).any()]
        block = np.column_stack([(self.countries == code).astype(float) for code in present])
        return block, [f"fe_{code}" for code in present]

    def trend_block(self) -> Tuple[np.ndarray, List[str]]:
        """Country-specific polynomial trends (rows x countries*degree)."""
        present = [code for code in self.country_order if (self.countries == code).any()]
        columns, names = [], []
        for code in present:
            mask = (self.countries == code).astype(float)
            for power in range(1, self.trend_degree + 1):
                columns.append(mask * self.time**power)
                names.append(f"trend_{code}_{power}")
        if not columns:
            return np.zeros((self.n_obs, 0)), []
        return np.column_stack(columns), names

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.x, columns=self.names)
        frame.insert(0, "y", self.y)
        frame.insert(0, "date", self.dates)
        frame.insert(0, "country", self.countries)
        return frame


def weekly_counts(panel: ObservationPanel, flow: str, stock: str | None = None) -> Tuple[np.ndarray, List[str]]:
    """
    Weekly counts (7-day changes) per country and period.

    Daily panels use C_t - C_{t-7} of the stock column when the country has
    one, otherwise the trailing 7-day sum of the flow. Weekly panels already
    hold weekly flow sums; stock differences are taken over one period.

    Returns:
        Tuple[np.ndarray, List[str]]: (countries x periods) counts and the
        countries that fell back to flow sums.
    """
    week = WEEK_DAYS // panel.step_days
    flows = panel.values(flow)
    counts = rolling_sum(flows, week) if week > 1 else flows.copy()
    fallback: List[str] = []
    if stock is None:
        return counts, fallback

    stocks = panel.values(stock)
    with np.errstate(invalid="ignore"):
        from_stock = stocks - np.concatenate([np.full(stocks.shape[:-1] + (week,), np.nan), stocks[..., :-week]], axis=-1)
    for idx, code in enumerate(panel.countries):
        if np.isfinite(stocks[idx]).any():
            counts[idx] = from_stock[idx]
        else:
            fallback.append(code)
    return counts, fallback


def _log_positive(counts: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    with np.errstate(invalid="ignore", divide="ignore"):
        nonpositive = np.isfinite(counts) & (counts <= 0)
        logs = np.where(counts > 0, np.log(np.where(counts > 0, counts, 1.0)), np.nan)
    return logs, nonpositive


def panel_sources(panel: ObservationPanel) -> Tuple[Dict[str, np.ndarray], Dict[str, np.ndarray]]:
    """
    Source arrays of the panel equations.

    Returns:
        Tuple of the source arrays (countries x periods) and, for the logged
        count sources, masks of non-positive weekly counts.
    """
    cases, fallback = weekly_counts(panel, "new_cases_pm", "cum_cases")
    if fallback:
        logger.warning("Cumulative cases missing; weekly cases from 7-day sums of daily cases", extra={"countries": fallback})
    deaths, _ = weekly_counts(panel, "new_deaths_pm")
    tests, _ = weekly_counts(panel, "new_tests")

    sources = {
        "v1": panel.values("v1"),
        "v2": panel.values("v2"),
        "policy": panel.values("policy"),
        "mobility": panel.values("mobility_index"),
    }
    masks = {}
    for name, counts in (("cases", cases), ("deaths", deaths), ("tests", tests)):
        sources[name], masks[name] = _log_positive(counts)
    return sources, masks


def chinese_flags(countries: Tuple[str, ...] | List[str], chinese_set: str = "baseline") -> np.ndarray:
    """Chinese-vaccine dummy per country."""
    return np.array([float(country_meta(code).chinese_flag(chinese_set)) for code in countries])


def _window(panel: ObservationPanel, spec: PanelSpec) -> Tuple[pd.Timestamp, pd.Timestamp]:
    if spec.window is None:
        return pd.Timestamp(panel.window_start), pd.Timestamp(panel.window_end)
    start, end = pd.Timestamp(spec.window[0]), pd.Timestamp(spec.window[1])
    if start < panel.dates[0] or end > panel.dates[-1]:
        raise ValidationError(f"Window {start.date()}..{end.date()} outside the panel dates {panel.dates[0].date()}..{panel.dates[-1].date()}")
    return start, end


def build_panel_design(panel: ObservationPanel, spec: PanelSpec) -> PanelDesign:
    """
    Build the stacked design of a panel specification.

    Rows are country-periods inside the window with a complete outcome and
    regressors. Weekly counts that are not positive are masked before logs.
    A daily panel is aggregated to weeks for weekly specifications.

    Args:
        panel: Observation panel.
        spec: Specification.

    Returns:
        PanelDesign: Design with cluster labels and trend variable.

    Raises:
        ValidationError: If a daily specification meets a weekly panel or
            the window lies outside the panel.
        BuildError: If no row survives masking.
    """
    if spec.frequency == "weekly" and panel.frequency == "daily":
        panel = weekly_aggregate(panel)
    elif spec.frequency != panel.frequency:
        raise ValidationError(f"Specification frequency '{spec.frequency}' does not match a {panel.frequency} panel")

    start, end = _window(panel, spec)
    sources, masks = panel_sources(panel)
    flags = chinese_flags(panel.countries, spec.chinese_set)

    terms = spec_terms(spec)
    y_all = outcome_term(spec).values(sources, flags, panel.step_days)
    x_all = np.stack([term.values(sources, flags, panel.step_days) for term in terms], axis=-1)

    in_window = np.asarray((panel.dates >= start) & (panel.dates <= end))
    complete = in_window[None, :] & np.isfinite(y_all) & np.isfinite(x_all).all(axis=-1)

    nonpositive = np.zeros_like(complete)
    for name in {"cases", "deaths", "tests"} & {source for term in [outcome_term(spec), *terms] for source in term.sources}:
        nonpositive |= masks[name]
    nonpositive &= in_window[None, :]

    drop_counts = {code: int(in_window.sum() - complete[idx].sum()) for idx, code in enumerate(panel.countries)}
    nonpositive_counts = {code: int(nonpositive[idx].sum()) for idx, code in enumerate(panel.countries)}
    if not complete.any():
        raise BuildError(drop_counts)

    country_idx, period_idx = np.nonzero(complete)
    span = max((end - start).days, 1)
    time = np.asarray((panel.dates[period_idx] - start).days, dtype=float) / span

    design = PanelDesign(
        spec=spec,
        terms=terms,
        names=[term.name for term in terms],
        y=y_all[country_idx, period_idx],
        x=x_all[country_idx, period_idx],
        countries=np.asarray(panel.countries, dtype=object)[country_idx],
        dates=panel.dates[period_idx],
        time=time,
        country_order=tuple(panel.countries),
        drop_counts=drop_counts,
        nonpositive_counts=nonpositive_counts,
        window=(start, end),
    )
    masked = {code: count for code, count in nonpositive_counts.items() if count}
    if masked:
        logger.warning("Non-positive weekly counts masked", extra={"counts": masked})
    logger.info("Panel design built", extra={"spec": spec.label(), "rows": design.n_obs, "countries": len(set(design.countries)), "regressors": len(terms)})
    return design
