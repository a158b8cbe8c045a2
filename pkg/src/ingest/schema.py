"""
Column vocabulary of raw inputs and of the canonical panel.
"""

from typing import Dict, Tuple

KEY_COLUMNS: Tuple[str, ...] = ("country", "date")

# logical raw columns, in canonical order
VALUE_COLUMNS: Tuple[str, ...] = (
    "new_cases_per_million",
    "new_deaths_per_million",
    "cumulative_cases",
    "new_tests",
    "v1_per_hundred",
    "v2_per_hundred",
    "total_doses_per_hundred",
    "policy_index",
    "mobility_retail",
    "mobility_grocery_pharmacy",
    "mobility_workplace",
)

# CSV headers of the public OWID, OxCGRT and Google mobility exports
DEFAULT_SCHEMA: Dict[str, str] = {
    "country": "location",
    "date": "date",
    "new_cases_per_million": "new_cases_per_million",
    "new_deaths_per_million": "new_deaths_per_million",
    "cumulative_cases": "total_cases",
    "new_tests": "new_tests",
    "v1_per_hundred": "people_vaccinated_per_hundred",
    "v2_per_hundred": "people_fully_vaccinated_per_hundred",
    "total_doses_per_hundred": "total_vaccinations_per_hundred",
    "policy_index": "containment_health_index",
    "mobility_retail": "retail_and_recreation_percent_change_from_baseline",
    "mobility_grocery_pharmacy": "grocery_and_pharmacy_percent_change_from_baseline",
    "mobility_workplace": "workplaces_percent_change_from_baseline",
}

# schema whose CSV headers are the logical names themselves
IDENTITY_SCHEMA: Dict[str, str] = {name: name for name in (*KEY_COLUMNS, *VALUE_COLUMNS)}

# raw logical column -> canonical panel column
PANEL_NAMES: Dict[str, str] = {
    "new_cases_per_million": "new_cases_pm",
    "new_deaths_per_million": "new_deaths_pm",
    "cumulative_cases": "cum_cases",
    "new_tests": "new_tests",
    "v1_per_hundred": "v1",
    "v2_per_hundred": "v2",
    "total_doses_per_hundred": "total_doses",
    "policy_index": "policy",
    "mobility_retail": "mobility_retail",
    "mobility_grocery_pharmacy": "mobility_grocery",
    "mobility_workplace": "mobility_workplace",
}

PANEL_COLUMNS: Tuple[str, ...] = (
    "country",
    "date",
    "new_cases_pm",
    "new_deaths_pm",
    "cum_cases",
    "new_tests",
    "v1",
    "v2",
    "total_doses",
    "policy",
    "mobility_retail",
    "mobility_grocery",
    "mobility_workplace",
    "mobility_index",
    "weekend",
)

SERIES_COLUMNS: Tuple[str, ...] = PANEL_COLUMNS[2:]

FLOW_COLUMNS: Tuple[str, ...] = ("new_cases_pm", "new_deaths_pm", "new_tests")
STOCK_COLUMNS: Tuple[str, ...] = (
    "cum_cases",
    "v1",
    "v2",
    "total_doses",
    "policy",
    "mobility_retail",
    "mobility_grocery",
    "mobility_workplace",
    "mobility_index",
)
VACCINATION_COLUMNS: Tuple[str, ...] = ("v1", "v2", "total_doses")
