"""
Synthetic raw inputs with known effects.

Daily log cases follow a weekly growth rate driven by lagged first doses,
policy and mobility; policy tightens when cases rise and mobility recovers as
policy eases and vaccination progresses. Deaths follow cases with a lag and a
vaccination-dependent fatality ratio. The generator is deterministic in
(countries, window, seed) and exercises every ingest path: gaps in policy and
vaccination reports, programmes starting mid-window, and a total-doses-only
country.
"""

from datetime import date
from typing import Dict, Sequence, Tuple

import numpy as np
import pandas as pd

from ..log import get_logger
from .countries import country_meta, list_countries
from .loader import RawSeriesTable, from_frame

logger = get_logger(__name__)

# weekly growth effects per unit of each regressor
SYNTHETIC_EFFECTS: Dict[str, float] = {
    "v1": -0.004,
    "v2": 0.0,
    "v1_chinese": 0.004,
    "v2_chinese": -0.004,
    "policy": -0.012,
    "mobility": 0.01,
    "mobility_policy": -0.35,
    "mobility_v1": 0.12,
}

DEFAULT_SEED = 20210708
ROLLOUT_START = date(2020, 12, 14)
# second-dose interval in days by country; default 28
_INTERVALS = {"CAN": 84, "GBR": 84, "USA": 24, "ISR": 21}


def _rollout(n_days: int, start: int, rate: float, cap: float, interval: int) -> Tuple[np.ndarray, np.ndarray]:
    days = np.arange(n_days)
    v1 = np.clip(rate * (days - start + 1), 0.0, cap)
    v2 = np.zeros(n_days)
    v2[interval:] = v1[:-interval]
    return v1, np.minimum(v2, v1)


def _simulate_country(code: str, dates: pd.DatetimeIndex, rng: np.random.Generator) -> pd.DataFrame:
    meta = country_meta(code)
    n_days = len(dates)
    population = meta.population or 5.0

    start = int(dates.searchsorted(pd.Timestamp(ROLLOUT_START))) + int(rng.integers(0, 40))
    v1, v2 = _rollout(n_days, start, rate=float(rng.uniform(0.25, 0.6)), cap=float(rng.uniform(55.0, 75.0)), interval=_INTERVALS.get(code, 28))

    a_v1 = SYNTHETIC_EFFECTS["v1"] + (SYNTHETIC_EFFECTS["v1_chinese"] if meta.chinese_vaccine else 0.0)
    a_v2 = SYNTHETIC_EFFECTS["v2"] + (SYNTHETIC_EFFECTS["v2_chinese"] if meta.chinese_vaccine else 0.0)
    drift = float(rng.uniform(0.05, 0.15))

    log_cases = np.empty(n_days)
    policy = np.empty(n_days)
    mobility = np.empty(n_days)
    log_cases[0] = np.log(rng.uniform(20.0, 120.0))
    reference = log_cases[0]
    policy[0] = 50.0
    mobility[0] = -15.0
    for t in range(1, n_days):
        target = np.clip(50.0 + 12.0 * (log_cases[max(t - 7, 0)] - reference), 5.0, 95.0)
        policy[t] = 0.9 * policy[t - 1] + 0.1 * target + rng.normal(0.0, 0.5)
        mobility[t] = -15.0 + SYNTHETIC_EFFECTS["mobility_policy"] * (policy[t] - 50.0) + SYNTHETIC_EFFECTS["mobility_v1"] * v1[t] + rng.normal(0.0, 1.5)

        growth = drift + a_v1 * v1[max(t - 21, 0)] + a_v2 * v2[max(t - 7, 0)]
        growth += SYNTHETIC_EFFECTS["policy"] * (policy[max(t - 14, 0)] - 50.0) + SYNTHETIC_EFFECTS["mobility"] * (mobility[max(t - 14, 0)] + 15.0)
        log_cases[t] = log_cases[t - 1] + growth / 7.0 + rng.normal(0.0, 0.04)

    weekday_factor = np.where(np.isin(dates.dayofweek, list(meta.weekend_days)), 0.8, 1.05)
    new_cases = np.exp(log_cases) * weekday_factor * rng.lognormal(0.0, 0.05, n_days)

    lagged_cases = np.exp(np.concatenate([np.full(18, log_cases[0]), log_cases[:-18]]))
    lagged_v1 = np.concatenate([np.zeros(21), v1[:-21]])
    fatality = 0.015 * (1.0 - 0.6 * lagged_v1 / 100.0)
    new_deaths = lagged_cases * fatality * rng.lognormal(0.0, 0.1, n_days)

    new_tests = population * 1e6 * 0.002 * np.exp(0.3 * (log_cases - reference)) * rng.lognormal(0.0, 0.05, n_days)

    retail = mobility - 5.0 + rng.normal(0.0, 3.0, n_days)
    grocery = mobility + 5.0 + rng.normal(0.0, 3.0, n_days)
    workplace = 3.0 * mobility - retail - grocery

    reported_policy = policy.copy()
    weekend = np.isin(dates.dayofweek, [5, 6])
    reported_policy[weekend & (rng.uniform(size=n_days) < 0.3)] = np.nan

    reported_v1, reported_v2 = v1.copy(), v2.copy()
    reported_v1[:start] = np.nan
    reported_v2[:start] = np.nan
    gaps = rng.uniform(size=n_days) < 0.1
    gaps[: start + 1] = False
    gaps[-1] = False
    reported_v1[gaps] = np.nan
    reported_v2[gaps] = np.nan
    total = reported_v1 + reported_v2
    if not meta.panel:
        # total-doses-only reporting
        reported_v1[:] = np.nan
        reported_v2[:] = np.nan

    return pd.DataFrame({
        "country": meta.name,
        "date": dates,
        "new_cases_per_million": new_cases,
        "new_deaths_per_million": new_deaths,
        "cumulative_cases": np.cumsum(new_cases) * population,
        "new_tests": np.round(new_tests),
        "v1_per_hundred": reported_v1,
        "v2_per_hundred": reported_v2,
        "total_doses_per_hundred": total,
        "policy_index": np.clip(reported_policy, 0.0, 100.0),
        "mobility_retail": retail,
        "mobility_grocery_pharmacy": grocery,
        "mobility_workplace": workplace,
    })


def synthetic_inputs(
    countries: Sequence[str] | None = None,
    window: Tuple[date | str, date | str] = (date(2020, 6, 1), date(2021, 7, 8)),
    seed: int = DEFAULT_SEED,
    history_days: int = 60,
) -> RawSeriesTable:
    """
    Generate a synthetic raw table.

    Args:
        countries: Countries to simulate. Defaults to the 37-country panel.
        window: Inclusive (start, end) of the study window.
        seed: Base seed; country j uses the sub-seed (seed, j).
        history_days: Extra days simulated before the window start.

    Returns:
        RawSeriesTable: Table whose country column holds English names.
    """
    codes = list(countries) if countries is not None else list_countries("panel")
    start = pd.Timestamp(window[0]) - pd.Timedelta(days=history_days)
    dates = pd.date_range(start, pd.Timestamp(window[1]), freq="D")

    frames = [_simulate_country(country_meta(code).country, dates, np.random.default_rng([seed, idx])) for idx, code in enumerate(codes)]
    table = from_frame(pd.concat(frames, ignore_index=True), source=f"synthetic:{seed}")
    logger.info("Synthetic inputs generated", extra={"countries": len(codes), "days": len(dates), "seed": seed})
    return table
