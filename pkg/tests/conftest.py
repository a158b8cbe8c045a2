from datetime import date

import pytest

from src.ingest import build_panel, synthetic_inputs

SMALL_COUNTRIES = ["CAN", "USA", "GBR", "ISR", "CHL", "URY", "DEU", "FRA"]
SMALL_WINDOW = (date(2020, 9, 1), date(2021, 7, 8))


@pytest.fixture(scope="session")
def synthetic_table():
    """Synthetic raw table for a small country set."""
    return synthetic_inputs(countries=SMALL_COUNTRIES, window=SMALL_WINDOW, seed=7, history_days=60)


@pytest.fixture(scope="session")
def synthetic_panel(synthetic_table):
    """Daily panel over the small window with 60 lead-in days."""
    return build_panel([synthetic_table], window=SMALL_WINDOW, countries=SMALL_COUNTRIES, history_days=60)
