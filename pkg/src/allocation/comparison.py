"""
Pointwise comparison of rollout strategies.
"""

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
import pandas as pd

from ..error import ComparisonError
from .efficacy import EfficacyProfile
from .rollout import RolloutSchedule, protection_path

_TOLERANCE = 1e-12


@dataclass(frozen=True)
class DominanceReport:
    """
    Per-day ranking of schedules by protection.

    Attributes:
        intervals: Dosing interval of each schedule, ascending.
        protection: Array (schedules, days) of protection paths in interval order.
        ranking: Per day, schedule positions from most to least protected
            (ties keep interval order).
        longer_dominates: Per day, whether protection is non-decreasing in
            the dosing interval.
    """

    intervals: List[int]
    protection: np.ndarray
    ranking: List[List[int]]
    longer_dominates: np.ndarray

    def dominates_from(self, day: int) -> bool:
        """Whether longer intervals weakly dominate on every day >= ``day``."""
        return bool(self.longer_dominates[day:].all())

    def ties(self, day: int) -> bool:
        """Whether all schedules give the same protection on ``day``."""
        column = self.protection[:, day]
        return bool(np.ptp(column) <= _TOLERANCE)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame({"day": np.arange(self.protection.shape[1])})
        for interval, path in zip(self.intervals, self.protection):
            frame[f"protection_{interval}"] = path
        frame["longer_dominates"] = self.longer_dominates
        return frame


def dominance_report(schedules: Sequence[RolloutSchedule], profile: EfficacyProfile) -> DominanceReport:
    """
    Rank schedules by protection on every day.

    Args:
        schedules: Schedules sharing horizon and capacity.
        profile: Vaccine efficacy.

    Returns:
        DominanceReport: Rankings and the weak-dominance verdict per day.

    Raises:
        ComparisonError: If no schedule is given or horizons/capacities differ.
    """
    if not schedules:
        raise ComparisonError("No schedules to compare")
    horizons = {schedule.horizon_days for schedule in schedules}
    if len(horizons) > 1:
        raise ComparisonError(f"Schedules have different horizons: {sorted(horizons)}")
    capacities = {schedule.capacity for schedule in schedules}
    if len(capacities) > 1:
        raise ComparisonError(f"Schedules have different capacities: {sorted(capacities)}")

    ordered = sorted(schedules, key=lambda schedule: schedule.interval_days)
    paths = np.vstack([protection_path(schedule, profile) for schedule in ordered])

    ranking = [np.argsort(-paths[:, day], kind="stable").tolist() for day in range(paths.shape[1])]
    if len(ordered) > 1:
        longer_dominates = (np.diff(paths, axis=0) >= -_TOLERANCE).all(axis=0)
    else:
        longer_dominates = np.ones(paths.shape[1], dtype=bool)

    return DominanceReport(
        intervals=[schedule.interval_days for schedule in ordered],
        protection=paths,
        ranking=ranking,
        longer_dominates=longer_dominates,
    )
