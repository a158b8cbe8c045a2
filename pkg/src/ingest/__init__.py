"""
Ingest module.
Loads raw country-level inputs and assembles aligned observation panels.
"""

from .schema import DEFAULT_SCHEMA, IDENTITY_SCHEMA, PANEL_COLUMNS, VALUE_COLUMNS
from .loader import RawSeriesTable, ValidationReport, Violation, load_raw, validate_table, from_frame
from .imputation import impute_policy, impute_vaccination
from .indexes import mobility_index, weekend_flags
from .countries import CountryMeta, country_meta, normalize_country, list_countries, weekend_flag
from .panel import ObservationPanel, STUDY_WINDOW, build_panel, weekly_aggregate, coverage_report, write_panel_csv, read_panel_csv
from .synthetic import SYNTHETIC_EFFECTS, synthetic_inputs

__all__ = [
    "DEFAULT_SCHEMA",
    "IDENTITY_SCHEMA",
    "PANEL_COLUMNS",
    "VALUE_COLUMNS",
    "RawSeriesTable",
    "ValidationReport",
    "Violation",
    "load_raw",
    "validate_table",
    "from_frame",
    "impute_policy",
    "impute_vaccination",
    "mobility_index",
    "weekend_flags",
    "CountryMeta",
    "country_meta",
    "normalize_country",
    "list_countries",
    "weekend_flag",
    "ObservationPanel",
    "STUDY_WINDOW",
    "build_panel",
    "weekly_aggregate",
    "coverage_report",
    "write_panel_csv",
    "read_panel_csv",
    "SYNTHETIC_EFFECTS",
    "synthetic_inputs",
]
