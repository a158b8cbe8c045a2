"""
Custom data module.
Imports and exports numeric helpers shared by the estimators.
"""

from .numeric import LOG_FLOOR, shift, difference, floored_log, rolling_sum, dependent_columns

__all__ = [
    "LOG_FLOOR",
    "shift",
    "difference",
    "floored_log",
    "rolling_sum",
    "dependent_columns",
]
