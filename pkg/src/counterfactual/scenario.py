"""
Counterfactual dosing scenario.
"""

from datetime import date
from typing import Literal, Tuple

from pydantic import Field, model_validator

from ..environment import SettingsModel
from ..error import ValidationError

OUTCOME = Literal["cases", "deaths"]

DEFAULT_DRAWS = 200
DEFAULT_SEED = 20210708
SWEEP_INTERVALS: Tuple[int, ...] = (6, 8, 12)


class Scenario(SettingsModel):
    """
    Hypothetical dosing policy for one country.

    Attributes:
        country: Country identifier (code, name or alias).
        interval_weeks: Weeks between first and second dose.
        v1_cap: Maximum first-dose coverage per hundred.
        start: First day the schedule may differ from observed.
        end: Last simulated day; defaults to the panel's last date.
        draws: Parameter replications.
        seed: Base seed; replication j uses the sub-seed (seed, j).
        outcomes: Outcomes to simulate.
        population: Population in millions; level summaries are in people
            when set and per million otherwise.
        sample_parameters: Draw coefficients from their sampling
            distribution; False keeps every replication at point estimates.
    """

    country: str
    interval_weeks: int = Field(ge=1)
    v1_cap: float = Field(gt=0.0, le=100.0)
    start: date
    end: date | None = None
    draws: int = Field(default=DEFAULT_DRAWS, ge=1)
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    outcomes: Tuple[OUTCOME, ...] = ("cases", "deaths")
    population: float | None = Field(default=None, gt=0.0)
    sample_parameters: bool = True

    @model_validator(mode="after")
    def _check_dates(self) -> "Scenario":
        if self.end is not None and self.end < self.start:
            raise ValidationError(f"Scenario end {self.end} precedes start {self.start}")
        if not self.outcomes:
            raise ValidationError("Scenario needs at least one outcome")
        return self

    @property
    def interval_days(self) -> int:
        return 7 * self.interval_weeks

    def label(self) -> str:
        return f"{self.country}:{self.interval_weeks}w:cap{self.v1_cap:g}"
