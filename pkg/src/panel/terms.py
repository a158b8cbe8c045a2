"""
Regressor terms of the panel equations.

Every term is a lagged level or 7-day change of one source series, optionally
multiplied by the Chinese-vaccine dummy or by a partner series at the same
lag. Sources are country x period arrays:

    v1, v2      coverage per hundred
    policy      containment index
    mobility    mobility index
    cases       log weekly new cases (log of the 7-day change in cumulative cases)
    deaths      log weekly new deaths
    tests       log weekly new tests

so the weekly growth rate of cases is the ``change`` of ``cases``.
"""

from dataclasses import dataclass
from typing import List, Literal, Mapping

import numpy as np

from ..data import shift
from .spec import PanelSpec

TRANSFORM = Literal["level", "change"]

WEEK_DAYS = 7

_SOURCE_LABELS = {
    "v1": "V1",
    "v2": "V2",
    "policy": "P",
    "mobility": "M",
    "cases": "logdC",
    "deaths": "logdD",
    "tests": "logdT",
}


@dataclass(frozen=True)
class Term:
    """
    One regressor (or outcome) column.

    Attributes:
        source: Source series key.
        lag: Lag in days.
        transform: "level" (x_{t-lag}) or "change" (x_{t-lag} - x_{t-lag-7}).
        chinese: Multiply by the Chinese-vaccine dummy.
        partner: Source multiplied in at the same lag (level).
    """

    source: str
    lag: int
    transform: TRANSFORM = "level"
    chinese: bool = False
    partner: str | None = None

    @property
    def name(self) -> str:
        label = _SOURCE_LABELS[self.source]
        if self.transform == "change":
            label = "d" + label
        if self.chinese:
            label += "CHN"
        if self.partner is not None:
            label += "x" + _SOURCE_LABELS[self.partner]
        return label if self.lag == 0 else f"{label}_l{self.lag}"

    @property
    def sources(self) -> List[str]:
        return [self.source] if self.partner is None else [self.source, self.partner]

    def values(self, sources: Mapping[str, np.ndarray], chinese: np.ndarray | None = None, step_days: int = 1) -> np.ndarray:
        """
        Term series over the last axis of the source arrays.

        Args:
            sources: Source arrays, shape (..., periods).
            chinese: Dummy broadcastable against the leading axes.
            step_days: Days per period (1 daily, 7 weekly).

        Returns:
            np.ndarray: Term values; NaN where a lag is unavailable.
        """
        lag = self.lag // step_days
        week = WEEK_DAYS // step_days
        series = np.asarray(sources[self.source], dtype=float)
        out = shift(series, lag)
        if self.transform == "change":
            out = out - shift(series, lag + week)
        if self.partner is not None:
            out = out * shift(np.asarray(sources[self.partner], dtype=float), lag)
        if self.chinese:
            flags = np.zeros(series.shape[:-1]) if chinese is None else np.asarray(chinese, dtype=float)
            out = out * flags[..., None]
        return out

    def value_at(self, sources: Mapping[str, np.ndarray], t: int, chinese: np.ndarray | float = 0.0) -> np.ndarray:
        """
        Term at period ``t`` of daily source arrays with shape (..., days).

        Only entries dated <= t are read, so sources may still be filled in
        up to ``t`` during a recursion.
        """
        series = sources[self.source]
        out = series[..., t - self.lag]
        if self.transform == "change":
            out = out - series[..., t - self.lag - WEEK_DAYS]
        if self.partner is not None:
            out = out * sources[self.partner][..., t - self.lag]
        if self.chinese:
            out = out * chinese
        return out

    @property
    def depth(self) -> int:
        """Oldest day read, relative to t."""
        return self.lag + (WEEK_DAYS if self.transform == "change" else 0)


def outcome_term(spec: PanelSpec) -> Term:
    """Dependent variable: weekly growth of cases or deaths, or mobility level."""
    if spec.outcome == "mobility":
        return Term("mobility", 0)
    return Term(spec.outcome, 0, "change")


def _vaccine_pair(lag_v1: int, lag_v2: int, transform: TRANSFORM, chinese: bool) -> List[Term]:
    terms = [Term("v1", lag_v1, transform), Term("v2", lag_v2, transform)]
    if chinese:
        terms += [Term("v1", lag_v1, transform, chinese=True), Term("v2", lag_v2, transform, chinese=True)]
    return terms


def spec_terms(spec: PanelSpec) -> List[Term]:
    """
    Regressors of a specification, in reporting order.

    Case growth: V1 lag 21, V2 lag 7 (both shifted by ``lag_shift``), policy
    and mobility lag 14, case growth and log weekly cases lag 14, test growth.
    Death growth: V1 lag 35, V2 lag 21, policy and mobility lag 28, death
    growth and log weekly deaths lag 28. Mobility: 7-day vaccine changes,
    vaccine levels lag 7, policy change and level lag 7, information growth
    and level at t, mobility lag 7.
    """
    shift_days = spec.lag_shift
    chinese = spec.include_chinese_terms

    if spec.outcome == "mobility":
        info = spec.info_source
        terms = _vaccine_pair(0, 0, "change", False)
        terms += _vaccine_pair(7, 7, "level", False)
        if chinese:
            terms += [Term("v1", 0, "change", chinese=True), Term("v2", 0, "change", chinese=True)]
            terms += [Term("v1", 7, chinese=True), Term("v2", 7, chinese=True)]
        terms += [Term("policy", 0, "change"), Term("policy", 7), Term(info, 0, "change"), Term(info, 0), Term("mobility", 7)]
        return terms

    if spec.outcome == "cases":
        base, v1_lag, v2_lag = 14, 21, 7
    else:
        base, v1_lag, v2_lag = 28, 35, 21

    terms = _vaccine_pair(v1_lag + shift_days, v2_lag + shift_days, "level", chinese)
    terms += [Term("policy", base), Term("mobility", base), Term(spec.outcome, base, "change"), Term(spec.outcome, base)]
    if spec.outcome == "cases":
        terms.append(Term("tests", 0, "change"))
    if spec.interactions == "vaccine_mobility":
        terms += [Term("v1", base, partner="mobility"), Term("v2", base, partner="mobility")]
    return terms
