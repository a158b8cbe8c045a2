"""
Derived per-day indexes.
"""

import numpy as np
import numpy.typing as npt
import pandas as pd

from .countries import CountryMeta


def mobility_index(retail: npt.ArrayLike, grocery_pharmacy: npt.ArrayLike, workplace: npt.ArrayLike) -> np.ndarray:
    """
    Mobility index M as the arithmetic mean of three mobility components.

    M is missing unless all three components are present. Components are
    summed in sorted order so the result does not depend on argument order.

    Args:
        retail: Retail and recreation percent change.
        grocery_pharmacy: Grocery and pharmacy percent change.
        workplace: Workplace percent change.

    Returns:
        np.ndarray: Per-day index.

    Example:
        >>> mobility_index([-30.0], [-15.0], [-45.0]).tolist()
        [-30.0]
    """
    stacked = np.vstack([np.asarray(retail, dtype=float), np.asarray(grocery_pharmacy, dtype=float), np.asarray(workplace, dtype=float)])
    return np.sort(stacked, axis=0).sum(axis=0) / 3.0


def weekend_flags(dates: pd.DatetimeIndex, meta: CountryMeta) -> np.ndarray:
    """Vectorised weekend dummy over a date index."""
    return np.isin(dates.dayofweek, list(meta.weekend_days)).astype(float)
