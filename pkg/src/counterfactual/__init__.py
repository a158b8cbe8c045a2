"""
Counterfactual module.
Hypothetical dosing schedules and simulated case, death and mobility paths with parameter-draw bands.
"""

from .scenario import Scenario, DEFAULT_DRAWS, SWEEP_INTERVALS
from .schedule import CfSchedule, make_schedule
from .simulate import CounterfactualResult, draw_coefficients, simulate_paths, death_paths, scenario_sweep
from .summary import SUMMARY_COLUMNS, summarize
from .chart import render_chart

__all__ = [
    "Scenario",
    "DEFAULT_DRAWS",
    "SWEEP_INTERVALS",
    "CfSchedule",
    "make_schedule",
    "CounterfactualResult",
    "draw_coefficients",
    "simulate_paths",
    "death_paths",
    "scenario_sweep",
    "SUMMARY_COLUMNS",
    "summarize",
    "render_chart",
]
