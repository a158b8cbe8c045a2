"""
Panel regression specifications.
"""

from datetime import date
from typing import Literal, Tuple

from pydantic import Field, model_validator

from ..environment import SettingsModel
from ..error import ValidationError

PANEL_OUTCOME = Literal["cases", "deaths", "mobility"]
TREND = Literal["none", "linear", "quadratic", "cubic"]
INTERACTIONS = Literal["none", "vaccine_mobility"]
INFO_VARIABLES = Literal["cases", "deaths"]

TREND_DEGREES = {"none": 0, "linear": 1, "quadratic": 2, "cubic": 3}
MAX_LAG_SHIFT = 3


class PanelSpec(SettingsModel):
    """
    One fixed-effects regression specification.

    Attributes:
        outcome: Weekly case growth, weekly death growth or the mobility index.
        trend: Country-specific polynomial trend. Defaults to quadratic for
            cases and deaths and to none for mobility.
        include_chinese_terms: Add Chinese-vaccine interactions of the vaccine terms.
        chinese_set: Country set flagged as Chinese-vaccine users.
        lag_shift: Days added to both vaccine lags.
        window: Inclusive (start, end) estimation window; defaults to the panel window.
        frequency: Daily or weekly estimation.
        interactions: Vaccine x mobility interactions (cases and deaths only).
        info_variables: Information variables of the mobility equation.
    """

    outcome: PANEL_OUTCOME = "cases"
    trend: TREND | None = None
    include_chinese_terms: bool = False
    chinese_set: Literal["baseline", "extended"] = "baseline"
    lag_shift: int = Field(default=0, ge=-MAX_LAG_SHIFT, le=MAX_LAG_SHIFT)
    window: Tuple[date, date] | None = None
    frequency: Literal["daily", "weekly"] = "daily"
    interactions: INTERACTIONS = "none"
    info_variables: INFO_VARIABLES | None = None

    @model_validator(mode="after")
    def _consistent(self) -> "PanelSpec":
        if self.interactions != "none" and self.outcome == "mobility":
            raise ValidationError("Vaccine x mobility interactions need outcome 'cases' or 'deaths'")
        if self.info_variables is not None and self.outcome != "mobility":
            raise ValidationError("info_variables only applies to the mobility outcome")
        if self.frequency == "weekly" and self.lag_shift % 7:
            raise ValidationError("Weekly specifications only accept lag shifts in whole weeks")
        if self.window is not None and self.window[1] < self.window[0]:
            raise ValidationError(f"Empty window: {self.window[0]} > {self.window[1]}")
        return self

    @property
    def trend_name(self) -> str:
        """Effective trend after the outcome default is applied."""
        if self.trend is None:
            return "none" if self.outcome == "mobility" else "quadratic"
        return self.trend

    @property
    def trend_degree(self) -> int:
        return TREND_DEGREES[self.trend_name]

    @property
    def info_source(self) -> str:
        """Outcome series driving the mobility equation's information terms."""
        return self.info_variables or "cases"

    def label(self) -> str:
        """Short human-readable description."""
        parts = [self.outcome, f"trend={self.trend_name}"]
        if self.include_chinese_terms:
            parts.append(f"chinese={self.chinese_set}")
        if self.lag_shift:
            parts.append(f"shift={self.lag_shift:+d}")
        if self.window is not None:
            parts.append(f"window={self.window[0]}..{self.window[1]}")
        if self.frequency != "daily":
            parts.append(self.frequency)
        if self.interactions != "none":
            parts.append(self.interactions)
        if self.outcome == "mobility":
            parts.append(f"info={self.info_source}")
        return " ".join(parts)
