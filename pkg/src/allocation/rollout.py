"""
Capacity-constrained two-dose rollout simulator.

Coverage is continuous (doses per hundred people). Day 0 is the state before
the programme; days 1..horizon administer at most ``capacity`` doses each.
"""

from dataclasses import dataclass, field
from typing import List, Literal, Sequence, get_args

import numpy as np
import pandas as pd

from ..error import DomainError
from ..log import get_logger
from .efficacy import EfficacyProfile, protection_levels

logger = get_logger(__name__)

SPLIT_RULE = Literal["equal", "due_priority"]
_valid_split_rules = get_args(SPLIT_RULE)

STRATEGY_INTERVALS = (21, 90, 120)


@dataclass(frozen=True)
class RolloutSchedule:
    """
    Cumulative first/second-dose coverage per day.

    Attributes:
        v1: Coverage with at least one dose per hundred, days 0..horizon.
        v2: Fully vaccinated per hundred, days 0..horizon.
        capacity: Doses per hundred per day.
        interval_days: Days between first and second dose.
        stock: Total doses per hundred available.
        split_rule: Allocation rule once second doses are due.
        warnings: Non-fatal issues found while simulating.
    """

    v1: np.ndarray
    v2: np.ndarray
    capacity: float
    interval_days: int
    stock: float
    split_rule: SPLIT_RULE = "equal"
    warnings: List[str] = field(default_factory=list)

    @property
    def horizon_days(self) -> int:
        return len(self.v1) - 1

    @property
    def days(self) -> np.ndarray:
        return np.arange(len(self.v1))

    def doses(self) -> np.ndarray:
        """Doses administered on each day (day 0 is 0)."""
        total = self.v1 + self.v2
        return np.concatenate([[0.0], np.diff(total)])

    def to_frame(self, profile: EfficacyProfile | None = None) -> pd.DataFrame:
        frame = pd.DataFrame({"day": self.days, "v1": self.v1, "v2": self.v2})
        if profile is not None:
            frame["protection"] = protection_path(self, profile)
        return frame


def simulate_rollout(
    stock: float,
    capacity: float,
    interval_days: int,
    horizon_days: int,
    split_rule: SPLIT_RULE = "equal",
) -> RolloutSchedule:
    """
    Simulate a rollout under a dosing interval.

    Days 1..interval give all capacity to first doses. Afterwards capacity is
    split per ``split_rule``: "equal" gives half to second doses (capped by
    the doses that are due), "due_priority" serves every due second dose
    first. Capacity one side cannot use goes to the other, first-dose
    coverage never exceeds 100 and total doses never exceed the stock.

    Args:
        stock: Doses per hundred available over the horizon.
        capacity: Doses per hundred deliverable per day.
        interval_days: Minimum days between first and second dose.
        horizon_days: Number of simulated days.
        split_rule: "equal" or "due_priority".

    Returns:
        RolloutSchedule: Coverage for days 0..horizon.

    Raises:
        DomainError: On negative stock or capacity, interval < 1 or an
            unknown split rule.

    Example:
        >>> schedule = simulate_rollout(100, 100 / 120, 120, 120)
        >>> round(schedule.v1[-1], 6), schedule.v2[-1]
        (100.0, 0.0)
    """
    if stock < 0 or capacity < 0:
        raise DomainError(f"stock and capacity must be non-negative (stock={stock}, capacity={capacity})")
    if interval_days < 1:
        raise DomainError(f"interval_days must be >= 1 (got {interval_days})")
    if horizon_days < 0:
        raise DomainError(f"horizon_days must be >= 0 (got {horizon_days})")
    if split_rule not in _valid_split_rules:
        raise DomainError(f"Invalid split_rule: {split_rule}. Must be one of {_valid_split_rules}")

    warnings: List[str] = []
    if capacity * horizon_days < 1:
        message = f"Degenerate schedule: capacity x horizon = {capacity * horizon_days:.6g} < 1 dose per hundred"
        logger.warning(message, extra={"capacity": capacity, "horizon_days": horizon_days})
        warnings.append(message)

    v1 = np.zeros(horizon_days + 1)
    v2 = np.zeros(horizon_days + 1)
    remaining = float(stock)

    for t in range(1, horizon_days + 1):
        available = min(capacity, remaining)
        first_room = max(100.0 - v1[t - 1], 0.0)

        if t <= interval_days:
            d2 = 0.0
            d1 = min(available, first_room)
        else:
            due = max(v1[t - interval_days] - v2[t - 1], 0.0)
            if split_rule == "equal":
                d2 = min(available / 2.0, due)
                d1 = min(available - d2, first_room)
                # first-dose side saturated
                d2 = min(available - d1, due)
            else:
                d2 = min(available, due)
                d1 = min(available - d2, first_room)

        v1[t] = v1[t - 1] + d1
        v2[t] = v2[t - 1] + d2
        remaining -= d1 + d2

    return RolloutSchedule(v1=v1, v2=v2, capacity=capacity, interval_days=interval_days, stock=stock, split_rule=split_rule, warnings=warnings)


def strategy_schedules(
    stock: float = 100.0,
    capacity: float = 100.0 / 120.0,
    horizon_days: int = 120,
    intervals: Sequence[int] = STRATEGY_INTERVALS,
    split_rule: SPLIT_RULE = "equal",
) -> List[RolloutSchedule]:
    """One schedule per dosing interval, sharing stock, capacity and horizon."""
    return [simulate_rollout(stock, capacity, interval, horizon_days, split_rule) for interval in intervals]


def protection_path(schedule: RolloutSchedule, profile: EfficacyProfile) -> np.ndarray:
    """
    Average protection on each day of a schedule.

    Args:
        schedule: Rollout schedule.
        profile: Vaccine efficacy.

    Returns:
        np.ndarray: Protection for days 0..horizon.
    """
    return protection_levels(profile, schedule.v1 / 100.0, schedule.v2 / 100.0)
