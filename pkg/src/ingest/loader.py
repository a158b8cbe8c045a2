"""
Raw CSV loading and validation.

A raw table is a long frame keyed by (country, date) carrying every logical
value column; columns a file does not provide are all missing, so tables from
different sources can be combined cell by cell.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping

import numpy as np
import pandas as pd

from ..error import NotFoundError, RowParseError, SchemaError
from ..log import get_logger
from .schema import DEFAULT_SCHEMA, KEY_COLUMNS, VALUE_COLUMNS

logger = get_logger(__name__)

DATE_FORMAT = "%Y-%m-%d"


@dataclass(frozen=True)
class Violation:
    """One invariant violation found in a raw table."""

    country: str
    date: str | None
    column: str
    rule: str
    value: float | None = None

    def to_record(self) -> Dict[str, object]:
        return {"country": self.country, "date": self.date, "column": self.column, "rule": self.rule, "value": self.value}


@dataclass(frozen=True)
class ValidationReport:
    """Invariant violations of a raw table; empty when the table is clean."""

    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def by_rule(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for violation in self.violations:
            counts[violation.rule] = counts.get(violation.rule, 0) + 1
        return counts

    def to_record(self) -> List[Dict[str, object]]:
        return [violation.to_record() for violation in self.violations]


@dataclass(frozen=True)
class RawSeriesTable:
    """
    Parsed raw input.

    Attributes:
        frame: Long frame with columns ``country``, ``date`` (datetime64) and
            every logical value column, sorted by (country, date).
        report: Invariant violations found at load time.
        source: File the table was read from, if any.
    """

    frame: pd.DataFrame
    report: ValidationReport = field(default_factory=ValidationReport)
    source: str | None = None

    @property
    def countries(self) -> List[str]:
        return sorted(self.frame["country"].unique().tolist())

    def __len__(self) -> int:
        return len(self.frame)


def _empty_value_frame(n_rows: int) -> Dict[str, np.ndarray]:
    return {column: np.full(n_rows, np.nan) for column in VALUE_COLUMNS}


def from_frame(frame: pd.DataFrame, source: str | None = None) -> RawSeriesTable:
    """
    Build a raw table from a frame that already uses logical column names.

    Missing value columns are added as all-missing; rows are sorted by
    (country, date) and the table is validated.

    Args:
        frame: Frame with at least ``country`` and ``date``.
        source: Optional provenance label.

    Returns:
        RawSeriesTable: Normalised, validated table.

    Raises:
        SchemaError: If ``country`` or ``date`` is missing.
    """
    for column in KEY_COLUMNS:
        if column not in frame.columns:
            raise SchemaError(column)

    data = {"country": frame["country"].astype(str).to_numpy(), "date": pd.to_datetime(frame["date"]).to_numpy()}
    values = _empty_value_frame(len(frame))
    for column in VALUE_COLUMNS:
        if column in frame.columns:
            values[column] = pd.to_numeric(frame[column], errors="coerce").to_numpy(dtype=float)
    data.update(values)

    normalized = pd.DataFrame(data).sort_values(["country", "date"], kind="mergesort").reset_index(drop=True)
    table = RawSeriesTable(frame=normalized, source=source)
    return RawSeriesTable(frame=normalized, report=validate_table(table), source=source)


def load_raw(path: str | Path, schema: Mapping[str, str] | None = None) -> RawSeriesTable:
    """
    Load a raw country-level CSV file.

    Args:
        path: UTF-8 CSV with a header row, YYYY-MM-DD dates and empty cells
            for missing values.
        schema: Map of logical column name to CSV header. Must map
            ``country`` and ``date``; logical columns left out of the schema
            are all missing. Defaults to the public export headers.

    Returns:
        RawSeriesTable: Parsed table sorted by (country, date) with its
        validation report attached. Unparseable numeric cells become missing.

    Raises:
        NotFoundError: If the file does not exist.
        SchemaError: If a mapped header is absent from the file.
        RowParseError: If a date cell is malformed (1-based file line number).

    Example:
        >>> table = load_raw("owid.csv")
        >>> table.report.ok
        True
    """
    path = Path(path)
    schema = dict(DEFAULT_SCHEMA if schema is None else schema)
    for column in KEY_COLUMNS:
        if column not in schema:
            raise SchemaError(column, f"Schema must map the '{column}' column")

    unknown = sorted(set(schema) - set(KEY_COLUMNS) - set(VALUE_COLUMNS))
    if unknown:
        raise SchemaError(unknown[0], f"Unknown logical column(s) in schema: {', '.join(unknown)}")

    if not path.is_file():
        raise NotFoundError(path)

    raw = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    for logical, header in schema.items():
        if header not in raw.columns:
            raise SchemaError(logical, f"Missing required column '{header}' (logical '{logical}') in {path.name}")

    dates = pd.to_datetime(raw[schema["date"]], format=DATE_FORMAT, errors="coerce")
    bad_dates = np.flatnonzero(dates.isna().to_numpy())
    if bad_dates.size:
        row = int(bad_dates[0])
        # header is line 1
        raise RowParseError(row + 2, f"malformed date '{raw[schema['date']].iloc[row]}'")

    frame = pd.DataFrame({"country": raw[schema["country"]].str.strip(), "date": dates})
    for logical in VALUE_COLUMNS:
        if logical in schema:
            cells = raw[schema[logical]].str.strip().replace("", np.nan)
            frame[logical] = pd.to_numeric(cells, errors="coerce")

    table = from_frame(frame, source=path.as_posix())
    logger.info("Raw table loaded", extra={"file": path.as_posix(), "rows": len(table), "countries": len(table.countries), "violations": len(table.report.violations)})
    return table


def validate_table(table: RawSeriesTable) -> ValidationReport:
    """
    List every invariant violation of a raw table.

    Checked rules: no duplicate dates per country (rows are already sorted),
    0 <= v2 <= v1 <= 100, policy within [0, 100], and non-negative counts.
    Missing cells are never violations.

    Args:
        table: Raw table.

    Returns:
        ValidationReport: One entry per (row, rule) violation.
    """
    frame = table.frame
    violations: List[Violation] = []
    if frame.empty:
        return ValidationReport()

    def _add(mask: np.ndarray, column: str, rule: str) -> None:
        for idx in np.flatnonzero(mask):
            value = frame[column].iloc[idx] if column in frame.columns and column != "date" else None
            violations.append(Violation(
                country=str(frame["country"].iloc[idx]),
                date=pd.Timestamp(frame["date"].iloc[idx]).strftime(DATE_FORMAT),
                column=column,
                rule=rule,
                value=None if value is None or pd.isna(value) else float(value),
            ))

    same_country = frame["country"].to_numpy()[1:] == frame["country"].to_numpy()[:-1]
    steps = np.diff(frame["date"].to_numpy().astype("datetime64[D]").astype(np.int64))
    _add(np.concatenate([[False], same_country & (steps == 0)]), "date", "duplicate_date")

    v1 = frame["v1_per_hundred"].to_numpy()
    v2 = frame["v2_per_hundred"].to_numpy()
    with np.errstate(invalid="ignore"):
        _add(v2 > v1, "v2_per_hundred", "v2_exceeds_v1")
        _add(v1 > 100, "v1_per_hundred", "above_100")
        for column in ("v1_per_hundred", "v2_per_hundred", "total_doses_per_hundred"):
            _add(frame[column].to_numpy() < 0, column, "negative")

        policy = frame["policy_index"].to_numpy()
        _add((policy < 0) | (policy > 100), "policy_index", "policy_out_of_range")

        for column in ("new_cases_per_million", "new_deaths_per_million", "cumulative_cases", "new_tests"):
            _add(frame[column].to_numpy() < 0, column, "negative_count")

    if violations:
        logger.warning("Raw table has invariant violations", extra={"source": table.source, "violations": len(violations)})
    return ValidationReport(violations=violations)
