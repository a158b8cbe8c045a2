"""
Observation panel assembly.

An ObservationPanel is a rectangular country x date grid stored as a long
frame in canonical column order, countries in the requested order and dates
ascending within each country. ``values(column)`` exposes any column as a
(countries, dates) array, which is how the estimators read it.
"""

from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Dict, Iterable, List, Literal, Sequence, Tuple, get_args

from joblib import Parallel, delayed
import numpy as np
import pandas as pd

from ..error import AssemblyError, ImputationError, MetadataError, NotFoundError, ValidationError
from ..file import write_frame_csv
from ..log import get_logger
from .countries import country_meta, list_countries, normalize_country
from .imputation import count_filled, impute_policy, impute_vaccination, leading_missing
from .indexes import mobility_index, weekend_flags
from .loader import RawSeriesTable
from .schema import FLOW_COLUMNS, PANEL_COLUMNS, PANEL_NAMES, SERIES_COLUMNS, STOCK_COLUMNS, VACCINATION_COLUMNS

logger = get_logger(__name__)

FREQUENCY = Literal["daily", "weekly"]
UNKNOWN_COUNTRIES = Literal["error", "ignore"]
_unknown_country_modes = get_args(UNKNOWN_COUNTRIES)

STUDY_WINDOW: Tuple[date, date] = (date(2020, 6, 1), date(2021, 7, 8))
IMPUTED_COLUMNS: Tuple[str, ...] = ("policy", *VACCINATION_COLUMNS)


@dataclass(frozen=True)
class ObservationPanel:
    """
    Aligned country x date panel.

    Attributes:
        frame: Long frame with the canonical panel columns.
        countries: Country identifiers in panel order.
        dates: Daily dates, or block-end dates for weekly panels.
        frequency: "daily" or "weekly".
        window_start: First date of the study window; earlier dates are
            lead-in history kept for lag construction.
        imputed: Per country, number of cells filled per column.
    """

    frame: pd.DataFrame
    countries: Tuple[str, ...]
    dates: pd.DatetimeIndex
    frequency: FREQUENCY = "daily"
    window_start: pd.Timestamp | None = None
    imputed: Dict[str, Dict[str, int]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.frame) != len(self.countries) * len(self.dates):
            raise ValidationError("Panel frame is not rectangular over countries x dates")
        if self.window_start is None:
            object.__setattr__(self, "window_start", self.dates[0] if len(self.dates) else None)

    @property
    def step_days(self) -> int:
        return 7 if self.frequency == "weekly" else 1

    @property
    def window_end(self) -> pd.Timestamp:
        return self.dates[-1]

    def country_index(self, country: str) -> int:
        """
        Position of a country in the panel.

        Raises:
            MetadataError: If the country is not part of the panel.
        """
        code = normalize_country(country)
        if code not in self.countries:
            raise MetadataError(code, f"Country '{code}' is not in the panel")
        return self.countries.index(code)

    def date_position(self, day: date | str | pd.Timestamp) -> int:
        """Index of the first panel date on or after ``day``."""
        return int(self.dates.searchsorted(pd.Timestamp(day)))

    def values(self, column: str) -> np.ndarray:
        """Column as a float array of shape (countries, dates)."""
        return self.frame[column].to_numpy(dtype=float).reshape(len(self.countries), len(self.dates))

    def series(self, country: str, column: str) -> pd.Series:
        """One country's column as a date-indexed Series."""
        return pd.Series(self.values(column)[self.country_index(country)], index=self.dates, name=column)

    def subset(self, countries: Iterable[str]) -> "ObservationPanel":
        """Panel restricted to some of its countries, in the given order."""
        codes = tuple(normalize_country(country) for country in countries)
        positions = [self.country_index(code) for code in codes]
        n_dates = len(self.dates)
        rows = np.concatenate([np.arange(pos * n_dates, (pos + 1) * n_dates) for pos in positions]) if positions else np.array([], dtype=int)
        return ObservationPanel(
            frame=self.frame.iloc[rows].reset_index(drop=True),
            countries=codes,
            dates=self.dates,
            frequency=self.frequency,
            window_start=self.window_start,
            imputed={code: self.imputed.get(code, {}) for code in codes},
        )


def _to_timestamp(day: date | str | pd.Timestamp) -> pd.Timestamp:
    return pd.Timestamp(day).normalize()


def _merge_tables(tables: Sequence[RawSeriesTable], unknown_countries: UNKNOWN_COUNTRIES = "error") -> pd.DataFrame:
    frames = [table.frame for table in tables]
    if not frames:
        return pd.DataFrame(columns=["country", "date", *PANEL_NAMES])
    combined = pd.concat(frames, ignore_index=True)

    codes: Dict[str, str | None] = {}
    for name in combined["country"].unique():
        try:
            codes[name] = normalize_country(name)
        except MetadataError:
            codes[name] = None
    unknown = sorted(name for name, code in codes.items() if code is None)
    if unknown and unknown_countries == "error":
        raise MetadataError(unknown[0], f"Country names outside the alias table: {', '.join(unknown)}")
    if unknown:
        logger.warning("Rows of countries outside the alias table ignored", extra={"countries": unknown})

    combined["country"] = combined["country"].map(codes)
    combined = combined.dropna(subset=["country"])
    # first non-missing value per cell across sources and duplicate rows
    return combined.groupby(["country", "date"], sort=True).first()


def _assemble_country(code: str, rows: pd.DataFrame, dates: pd.DatetimeIndex) -> Tuple[pd.DataFrame, Dict[str, int]]:
    meta = country_meta(code)
    raw = rows.reindex(dates).rename(columns=PANEL_NAMES)
    raw = raw[[PANEL_NAMES[name] for name in PANEL_NAMES]]
    out = raw.copy()

    imputed: Dict[str, int] = {}
    try:
        out["policy"] = impute_policy(raw["policy"], weekend_days=meta.weekend_days)
        imputed["policy_backfilled"] = leading_missing(raw["policy"])
    except ImputationError:
        logger.warning("Policy series missing; left unimputed", extra={"country": code})
    imputed["policy"] = count_filled(raw["policy"], out["policy"])

    for column in VACCINATION_COLUMNS:
        out[column] = impute_vaccination(raw[column])
        imputed[column] = count_filled(raw[column], out[column])

    out["mobility_index"] = mobility_index(out["mobility_retail"], out["mobility_grocery"], out["mobility_workplace"])
    out["weekend"] = weekend_flags(dates, meta)
    out.insert(0, "date", dates)
    out.insert(0, "country", code)
    return out[list(PANEL_COLUMNS)].reset_index(drop=True), imputed


def build_panel(
    tables: Sequence[RawSeriesTable],
    window: Tuple[date | str, date | str] = STUDY_WINDOW,
    countries: Sequence[str] | None = None,
    history_days: int = 0,
    jobs: int = 1,
    unknown_countries: UNKNOWN_COUNTRIES = "error",
) -> ObservationPanel:
    """
    Assemble an aligned daily panel from raw tables.

    Tables are combined cell by cell (first non-missing value wins), each
    country is reindexed onto the contiguous calendar, policy and vaccination
    gaps are imputed, the mobility index and weekend flags are derived.

    Args:
        tables: Raw tables, e.g. one per source file.
        window: Inclusive (start, end) of the study window.
        countries: Countries to include, in order. Defaults to the bundled
            37-country panel.
        history_days: Extra lead-in days kept before the window start.
        jobs: Worker count for per-country assembly.
        unknown_countries: "error" rejects country names in the tables that
            are not in the alias table; "ignore" drops their rows with a warning.

    Returns:
        ObservationPanel: Daily panel over [start - history_days, end].

    Raises:
        ValidationError: If the window is empty or history_days is negative.
        MetadataError: If a requested country is not in the alias table,
            or a table holds an unknown country name under "error".
        AssemblyError: If requested countries are absent from every table.

    Example:
        >>> panel = build_panel([load_raw("owid.csv")], countries=["Canada"])
        >>> len(panel.dates)
        403
    """
    start, end = _to_timestamp(window[0]), _to_timestamp(window[1])
    if end < start:
        raise ValidationError(f"Empty window: {start.date()} > {end.date()}")
    if history_days < 0:
        raise ValidationError("history_days must be non-negative")

    codes = [normalize_country(country) for country in (countries if countries is not None else list_countries("panel"))]
    if len(set(codes)) != len(codes):
        raise ValidationError(f"Duplicate countries requested: {codes}")

    if unknown_countries not in _unknown_country_modes:
        raise ValidationError(f"Invalid unknown_countries: {unknown_countries}. Must be one of {_unknown_country_modes}")
    merged = _merge_tables(tables, unknown_countries)
    present = set(merged.index.get_level_values("country")) if len(merged) else set()
    missing = [code for code in codes if code not in present]
    if missing:
        raise AssemblyError(missing)

    dates = pd.date_range(start - pd.Timedelta(days=history_days), end, freq="D")
    assembled = Parallel(n_jobs=jobs)(delayed(_assemble_country)(code, merged.loc[code], dates) for code in codes)

    frame = pd.concat([part for part, _ in assembled], ignore_index=True)
    imputed = {code: counts for code, (_, counts) in zip(codes, assembled)}
    panel = ObservationPanel(frame=frame, countries=tuple(codes), dates=dates, frequency="daily", window_start=start, imputed=imputed)

    for code, counts in coverage_report(panel).items():
        logger.info("Country coverage", extra={"country": code, "non_missing": counts, "imputed": imputed[code]})
        if imputed[code].get("policy_backfilled"):
            logger.warning("Leading policy values backfilled", extra={"country": code, "filled": imputed[code]["policy_backfilled"]})
    return panel


def weekly_aggregate(panel: ObservationPanel) -> ObservationPanel:
    """
    Aggregate a daily panel to 7-day blocks.

    Blocks start at the first panel date. Flow columns are summed (a block
    with a missing day is missing), stock columns take the block-end value
    and the weekend flag is dropped (left missing). A trailing partial week
    is dropped with a warning.

    Args:
        panel: Daily panel.

    Returns:
        ObservationPanel: Weekly panel dated by block-end days.

    Raises:
        ValidationError: If the panel is already weekly or shorter than a week.
    """
    if panel.frequency != "daily":
        raise ValidationError("weekly_aggregate expects a daily panel")

    n_blocks, remainder = divmod(len(panel.dates), 7)
    if n_blocks == 0:
        raise ValidationError("Panel is shorter than one week")
    if remainder:
        logger.warning("Trailing partial week dropped", extra={"dropped_days": remainder, "last_date": panel.dates[-1].date()})

    n_countries = len(panel.countries)
    week_dates = panel.dates[6 : n_blocks * 7 : 7]
    columns: Dict[str, np.ndarray] = {}
    for column in FLOW_COLUMNS:
        blocks = panel.values(column)[:, : n_blocks * 7].reshape(n_countries, n_blocks, 7)
        columns[column] = blocks.sum(axis=2)
    for column in STOCK_COLUMNS:
        columns[column] = panel.values(column)[:, 6 : n_blocks * 7 : 7]
    columns["weekend"] = np.full((n_countries, n_blocks), np.nan)

    frame = pd.DataFrame({
        "country": np.repeat(np.array(panel.countries, dtype=object), n_blocks),
        "date": np.tile(week_dates.to_numpy(), n_countries),
        **{column: values.reshape(-1) for column, values in columns.items()},
    })[list(PANEL_COLUMNS)]

    block_starts = panel.dates[0 : n_blocks * 7 : 7]
    inside = np.flatnonzero(block_starts >= panel.window_start)
    window_start = week_dates[inside[0]] if inside.size else week_dates[0]
    return ObservationPanel(frame=frame, countries=panel.countries, dates=pd.DatetimeIndex(week_dates), frequency="weekly", window_start=window_start, imputed=panel.imputed)


def coverage_report(panel: ObservationPanel) -> Dict[str, Dict[str, int]]:
    """
    Per-country coverage with the imputation state.

    Every series column gets its non-missing count. ``imputed_<column>``
    counts the cells filled by imputation (policy and vaccination) and
    ``policy_backfilled`` the leading policy days filled from the first
    report. Panels read back from CSV carry no imputation state and report 0.

    Returns:
        Dict[str, Dict[str, int]]: country -> column -> count.
    """
    report: Dict[str, Dict[str, int]] = {}
    present = {column: np.isfinite(panel.values(column)).sum(axis=1) for column in SERIES_COLUMNS}
    for idx, code in enumerate(panel.countries):
        filled = panel.imputed.get(code, {})
        report[code] = {column: int(present[column][idx]) for column in SERIES_COLUMNS}
        for column in IMPUTED_COLUMNS:
            report[code][f"imputed_{column}"] = int(filled.get(column, 0))
        report[code]["policy_backfilled"] = int(filled.get("policy_backfilled", 0))
    return report


def write_panel_csv(panel: ObservationPanel, path: str | Path) -> Path:
    """Write a panel as canonical CSV (one row per country-date)."""
    frame = panel.frame.copy()
    frame["date"] = pd.DatetimeIndex(frame["date"]).strftime("%Y-%m-%d")
    return write_frame_csv(path, frame, columns=PANEL_COLUMNS)


def read_panel_csv(path: str | Path, window_start: date | str | None = None) -> ObservationPanel:
    """
    Read a canonical panel CSV.

    Frequency is inferred from the date spacing (1 or 7 days).

    Raises:
        NotFoundError: If the file does not exist.
        ValidationError: If the file is not a rectangular canonical panel.
    """
    path = Path(path)
    if not path.is_file():
        raise NotFoundError(path)
    frame = pd.read_csv(path, encoding="utf-8", keep_default_na=True, na_values=[""])
    missing_columns = [column for column in PANEL_COLUMNS if column not in frame.columns]
    if missing_columns:
        raise ValidationError(f"Not a canonical panel file, missing columns: {missing_columns}")

    frame = frame[list(PANEL_COLUMNS)]
    frame["date"] = pd.to_datetime(frame["date"], format="%Y-%m-%d")
    for column in SERIES_COLUMNS:
        frame[column] = frame[column].astype(float)

    countries: List[str] = list(dict.fromkeys(frame["country"].astype(str)))
    dates = pd.DatetimeIndex(sorted(frame["date"].unique()))
    steps = np.unique(np.diff(dates.to_numpy()).astype("timedelta64[D]").astype(int))
    if steps.size > 1 or (steps.size == 1 and steps[0] not in (1, 7)):
        raise ValidationError(f"Irregular date spacing in panel file: {steps.tolist()}")
    frequency: FREQUENCY = "weekly" if steps.size and steps[0] == 7 else "daily"

    frame = frame.set_index(["country", "date"])
    full = pd.MultiIndex.from_product([countries, dates], names=["country", "date"])
    if len(frame) != len(full) or not frame.index.isin(full).all():
        raise ValidationError("Panel file is not rectangular over countries x dates")
    frame = frame.reindex(full).reset_index()

    start = _to_timestamp(window_start) if window_start is not None else dates[0]
    logger.info("Panel loaded", extra={"file": path.as_posix(), "countries": len(countries), "dates": len(dates), "frequency": frequency})
    return ObservationPanel(frame=frame, countries=tuple(countries), dates=dates, frequency=frequency, window_start=start)
