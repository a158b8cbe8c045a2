"""
Allocation module.
Protection calculus for dose allocations and the capacity-constrained rollout simulator.
"""

from .efficacy import EfficacyProfile, DEFAULT_ALLOCATIONS, protection_level, protection_levels, protection_table
from .rollout import RolloutSchedule, SPLIT_RULE, STRATEGY_INTERVALS, simulate_rollout, strategy_schedules, protection_path
from .comparison import DominanceReport, dominance_report

__all__ = [
    "EfficacyProfile",
    "DEFAULT_ALLOCATIONS",
    "protection_level",
    "protection_levels",
    "protection_table",
    "RolloutSchedule",
    "SPLIT_RULE",
    "STRATEGY_INTERVALS",
    "simulate_rollout",
    "strategy_schedules",
    "protection_path",
    "DominanceReport",
    "dominance_report",
]
