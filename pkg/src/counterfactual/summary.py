"""
Level summaries of counterfactual results.
"""

from datetime import date
from typing import Dict, Mapping, Sequence, Tuple

import numpy as np
import pandas as pd

from ..error import SummaryError
from .simulate import CounterfactualResult

DateRange = Tuple[date | str | pd.Timestamp, date | str | pd.Timestamp]

SUMMARY_COLUMNS = (
    "window",
    "start",
    "end",
    "days",
    "observed_mean",
    "cf_mean",
    "average_delta",
    "cumulative_delta",
    "percent_change",
)


def _named(windows: Sequence[DateRange] | Mapping[str, DateRange] | None) -> Dict[str, DateRange]:
    if windows is None:
        return {}
    if isinstance(windows, Mapping):
        return dict(windows)
    return {f"{pd.Timestamp(start).date()}..{pd.Timestamp(end).date()}": (start, end) for start, end in windows}


def _row(result: CounterfactualResult, name: str, start: pd.Timestamp, end: pd.Timestamp) -> Dict[str, object]:
    if end < start:
        raise SummaryError(f"Empty summary window '{name}': {start.date()} > {end.date()}")
    if start < result.dates[0] or end > result.dates[-1]:
        raise SummaryError(f"Summary window '{name}' outside the result range {result.dates[0].date()}..{result.dates[-1].date()}")
    rows = np.asarray((result.dates >= start) & (result.dates <= end))
    if not rows.any():
        raise SummaryError(f"Summary window '{name}' contains no simulated day")

    observed = result.observed_level[rows]
    counterfactual = result.level_mean[rows]
    cumulative = float(np.sum(counterfactual - observed))
    observed_total = float(np.sum(observed))
    return {
        "window": name,
        "start": start.date(),
        "end": end.date(),
        "days": int(rows.sum()),
        "observed_mean": float(observed.mean()),
        "cf_mean": float(counterfactual.mean()),
        "average_delta": cumulative / int(rows.sum()),
        "cumulative_delta": cumulative,
        "percent_change": 100.0 * cumulative / observed_total if observed_total else float("nan"),
    }


def summarize(result: CounterfactualResult, sub_windows: Sequence[DateRange] | Mapping[str, DateRange] | None = None) -> pd.DataFrame:
    """
    Average daily and cumulative level changes of a counterfactual.

    One row per sub-window followed by a "full" row over the whole result.

    Args:
        result: Counterfactual result.
        sub_windows: Inclusive date ranges, as a sequence or keyed by name.

    Returns:
        pd.DataFrame: Summary with ``SUMMARY_COLUMNS``.

    Raises:
        SummaryError: If a window is empty or outside the result range.
    """
    rows = [_row(result, name, pd.Timestamp(start), pd.Timestamp(end)) for name, (start, end) in _named(sub_windows).items()]
    rows.append(_row(result, "full", result.dates[0], result.dates[-1]))
    return pd.DataFrame(rows, columns=list(SUMMARY_COLUMNS))
