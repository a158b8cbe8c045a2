"""
Gap filling for policy and vaccination series.

Both imputers take a Series indexed by calendar day and never alter a
non-missing cell, so applying them twice changes nothing.
"""

from typing import Sequence

import numpy as np
import pandas as pd

from ..error import ImputationError
from ..log import get_logger

logger = get_logger(__name__)


def _check_series(series: pd.Series) -> pd.Series:
    if not isinstance(series.index, pd.DatetimeIndex):
        series = series.copy()
        series.index = pd.DatetimeIndex(series.index)
    return series.astype(float)


def impute_policy(series: pd.Series, weekend_days: Sequence[int] = (5, 6)) -> pd.Series:
    """
    Fill gaps in a daily policy index.

    Weekday gaps are linearly interpolated in time between the nearest
    non-missing neighbours; weekend gaps take the previous (possibly
    interpolated) value; trailing gaps carry the last value forward and
    leading gaps are backfilled from the first value.

    Args:
        series: Daily values indexed by date.
        weekend_days: Weekday numbers (Monday=0) treated as the weekend.

    Returns:
        pd.Series: Gap-free series on the same index.

    Raises:
        ImputationError: If the series has no non-missing value.

    Example:
        >>> s = pd.Series([50.0, np.nan, 60.0], index=pd.date_range("2021-03-01", periods=3))
        >>> impute_policy(s).tolist()
        [50.0, 55.0, 60.0]
    """
    series = _check_series(series)
    missing = series.isna().to_numpy()
    if missing.all():
        raise ImputationError("Policy series has no observed value")
    if not missing.any():
        return series

    interpolated = series.interpolate(method="time", limit_area="inside")
    weekend = np.isin(series.index.dayofweek, list(weekend_days))
    interpolated.loc[missing & weekend] = np.nan
    filled = interpolated.ffill().bfill()

    leading = int(np.argmax(~missing))
    if leading:
        logger.debug("Leading policy values backfilled", extra={"filled": leading})
    return filled


def impute_vaccination(series: pd.Series) -> pd.Series:
    """
    Fill gaps in a cumulative vaccination series.

    Days before the first report are 0 (programme not started), interior gaps
    are linearly interpolated in time and trailing gaps carry the last report
    forward. An all-missing series is returned unchanged.

    Args:
        series: Daily cumulative coverage indexed by date.

    Returns:
        pd.Series: Filled series on the same index.
    """
    series = _check_series(series)
    observed = series.notna().to_numpy()
    if not observed.any() or observed.all():
        return series

    filled = series.interpolate(method="time", limit_area="inside").ffill()
    first = int(np.argmax(observed))
    filled.iloc[:first] = 0.0
    return filled


def count_filled(before: pd.Series, after: pd.Series) -> int:
    """Number of cells missing in ``before`` but present in ``after``."""
    return int((before.isna() & after.notna()).sum())


def leading_missing(series: pd.Series) -> int:
    """Number of missing cells before the first observed value."""
    observed = series.notna().to_numpy()
    return int(np.argmax(observed)) if observed.any() else len(series)

