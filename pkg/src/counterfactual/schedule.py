"""
Hypothetical first/second-dose schedules under dose conservation.

The observed daily flow of doses (change in V1 + V2) is reallocated from the
divergence day onwards. Each day's doses go, in order, to:

    1. cohorts due for their second dose (first-dosed at least the interval
       earlier and not yet fully dosed, first in first out),
    2. first doses while coverage is below the cap,
    3. early second doses of unfinished cohorts once the cap binds.

The effective cap never falls below observed first-dose coverage, so these
three always absorb the day's doses.

Days before the divergence day keep the observed coverage.
"""

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np
import pandas as pd

from ..error import DomainError, SimulationError, ValidationError
from ..log import get_logger

logger = get_logger(__name__)

CONSERVATION_TOL = 1e-9


@dataclass(frozen=True)
class CfSchedule:
    """
    Counterfactual coverage per day.

    Attributes:
        dates: Days of the schedule.
        v1: Counterfactual first-dose coverage per hundred.
        v2: Counterfactual full coverage per hundred.
        observed_v1: Observed first-dose coverage.
        observed_v2: Observed full coverage.
        interval_days: Days between doses.
        v1_cap: First-dose cap per hundred.
        start_index: First reallocated day.
        early_second_doses: Doses per hundred given as second doses before
            the interval because the cap bound.
    """

    dates: pd.DatetimeIndex
    v1: np.ndarray
    v2: np.ndarray
    observed_v1: np.ndarray
    observed_v2: np.ndarray
    interval_days: int
    v1_cap: float
    start_index: int = 0
    early_second_doses: float = 0.0

    @property
    def total(self) -> np.ndarray:
        return self.v1 + self.v2

    @property
    def divergence_index(self) -> int | None:
        """First day the schedule differs from observed, None if it never does."""
        differs = (np.abs(self.v1 - self.observed_v1) > CONSERVATION_TOL) | (np.abs(self.v2 - self.observed_v2) > CONSERVATION_TOL)
        hits = np.flatnonzero(differs)
        return int(hits[0]) if hits.size else None

    def max_conservation_error(self) -> float:
        return float(np.max(np.abs(self.total - (self.observed_v1 + self.observed_v2)), initial=0.0))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "date": self.dates,
            "v1_observed": self.observed_v1,
            "v2_observed": self.observed_v2,
            "v1_cf": self.v1,
            "v2_cf": self.v2,
        })

    def to_record(self) -> Dict[str, Any]:
        start = self.dates[self.start_index] if self.start_index < len(self.dates) else None
        return {
            "interval_days": self.interval_days,
            "v1_cap": self.v1_cap,
            "start": str(start.date()) if isinstance(start, pd.Timestamp) else start,
            "early_second_doses": self.early_second_doses,
            "max_conservation_error": self.max_conservation_error(),
        }


def make_schedule(
    v1: np.ndarray | pd.Series,
    v2: np.ndarray | pd.Series,
    interval_weeks: int,
    v1_cap: float,
    start_index: int = 0,
    dates: pd.DatetimeIndex | None = None,
) -> CfSchedule:
    """
    Reallocate the observed dose flow under a dosing interval and first-dose cap.

    The cap only binds once reached: days whose observed first-dose coverage
    already exceeds it use the observed value as the cap.

    Args:
        v1: Observed first-dose coverage per day.
        v2: Observed full coverage per day.
        interval_weeks: Weeks between doses.
        v1_cap: First-dose cap per hundred.
        start_index: First reallocated day; earlier days keep observed values.
        dates: Day labels; taken from a Series index or numbered from 0.

    Returns:
        CfSchedule: Counterfactual coverage with conserved daily totals.

    Raises:
        ValidationError: If arguments or observed series are invalid.
        SimulationError: If observed V1 or V2 has missing values, as for
            countries reporting total doses only.
        DomainError: If observed total coverage decreases.
    """
    if dates is None:
        dates = v1.index if isinstance(v1, pd.Series) else pd.RangeIndex(len(v1))
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    if v1.shape != v2.shape or v1.ndim != 1:
        raise ValidationError("Observed V1 and V2 must be one-dimensional series of equal length")
    if not (np.isfinite(v1).all() and np.isfinite(v2).all()):
        raise SimulationError(
            "Observed first- and second-dose coverage has missing values; countries reporting total doses only "
            "use the total-dose term and cannot be given a first/second-dose counterfactual schedule"
        )
    if interval_weeks < 1:
        raise ValidationError(f"interval_weeks must be at least 1 (got {interval_weeks})")
    if not 0.0 < v1_cap <= 100.0:
        raise ValidationError(f"v1_cap must lie in (0, 100] (got {v1_cap})")
    if not 0 <= start_index <= len(v1):
        raise ValidationError(f"start_index {start_index} outside 0..{len(v1)}")

    total = v1 + v2
    drops = np.flatnonzero(np.diff(total) < -CONSERVATION_TOL)
    if drops.size:
        raise DomainError(f"Observed total coverage decreases at {dates[drops[0] + 1]}")

    interval = 7 * interval_weeks
    cf_v1, cf_v2 = v1.copy(), v2.copy()
    early = 0.0
    for t in range(start_index, len(v1)):
        prev_v1 = cf_v1[t - 1] if t else 0.0
        prev_v2 = cf_v2[t - 1] if t else 0.0
        doses = max(total[t] - (prev_v1 + prev_v2), 0.0)

        due = max((cf_v1[t - interval] if t >= interval else 0.0) - prev_v2, 0.0)
        second = min(doses, due)
        rest = doses - second

        room = max(max(v1_cap, v1[t]) - prev_v1, 0.0)
        first = min(rest, room)
        rest -= first

        backlog = prev_v1 + first - prev_v2 - second
        early_second = min(rest, max(backlog, 0.0))
        early += early_second

        cf_v1[t] = prev_v1 + first
        # prev_v2 + second + early_second, conserved exactly
        cf_v2[t] = total[t] - cf_v1[t]

    schedule = CfSchedule(
        dates=dates,
        v1=cf_v1,
        v2=cf_v2,
        observed_v1=v1,
        observed_v2=v2,
        interval_days=interval,
        v1_cap=float(v1_cap),
        start_index=start_index,
        early_second_doses=early,
    )
    if early > 0.0:
        logger.warning("First-dose cap bound; doses given as early second doses", extra={"doses": early, "interval_days": interval})
    return schedule
