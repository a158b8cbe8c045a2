import pytest
import numpy as np
import pandas as pd

from src.error import InsufficientDataError, ValidationError
from src.ingest import PANEL_COLUMNS, ObservationPanel
from src.timeseries.design import build_ts_design, series_design, term_name

N_DAYS = 160
HISTORY = 40


def _single_country_panel(**overrides):
    dates = pd.date_range("2021-01-01", periods=N_DAYS, freq="D")
    rng = np.random.default_rng(3)
    frame = pd.DataFrame({
        "country": "CAN",
        "date": dates,
        "new_cases_pm": np.exp(rng.normal(4.0, 0.3, N_DAYS)),
        "new_deaths_pm": np.exp(rng.normal(0.5, 0.3, N_DAYS)),
        "cum_cases": np.arange(1, N_DAYS + 1) * 100.0,
        "new_tests": np.exp(rng.normal(9.0, 0.2, N_DAYS)),
        "v1": np.zeros(N_DAYS),
        "v2": np.zeros(N_DAYS),
        "total_doses": np.zeros(N_DAYS),
        "policy": rng.uniform(40.0, 60.0, N_DAYS),
        "mobility_retail": rng.normal(-10.0, 2.0, N_DAYS),
        "mobility_grocery": rng.normal(0.0, 2.0, N_DAYS),
        "mobility_workplace": rng.normal(-20.0, 2.0, N_DAYS),
        "mobility_index": rng.normal(-10.0, 2.0, N_DAYS),
        "weekend": np.isin(dates.dayofweek, [5, 6]).astype(float),
    })
    for column, values in overrides.items():
        frame[column] = values
    return ObservationPanel(frame=frame[list(PANEL_COLUMNS)], countries=("CAN",), dates=dates, window_start=dates[HISTORY])


@pytest.mark.unit
@pytest.mark.fast
class TestBuildTsDesign:
    """Test cases for build_ts_design function."""

    def test_case_columns(self):
        """Test the default case design columns and lags."""
        design = build_ts_design(_single_country_panel(), "Canada")

        assert design.exog_names == ["const", "dV1_l21", "dV2_l7", "dlogT", "Wkd", "dP_l14", "dM_l14"]
        weekend = design.exog[:, design.exog_names.index("Wkd")]
        np.testing.assert_array_equal(weekend[design.valid], np.isin(design.dates.dayofweek, [5, 6])[design.valid].astype(float))
        assert design.country == "CAN"
        assert design.dates[0] == pd.Timestamp("2021-01-01") + pd.Timedelta(days=HISTORY)
        assert design.n_obs == N_DAYS - HISTORY

    def test_death_columns(self):
        """Test the death design shifts lags 14 days and drops tests."""
        design = build_ts_design(_single_country_panel(), "CAN", outcome="deaths")

        assert design.exog_names == ["const", "dV1_l35", "dV2_l21", "Wkd", "dP_l28", "dM_l28"]
        weekend = design.exog[:, design.exog_names.index("Wkd")]
        assert set(weekend[design.valid]) == {0.0, 1.0}
        assert weekend[design.valid].sum() == (design.dates[design.valid].dayofweek >= 5).sum()

    def test_constant_series_zero_outcome(self):
        """Test that constant cases give an identically zero outcome."""
        design = build_ts_design(_single_country_panel(new_cases_pm=np.full(N_DAYS, 25.0)), "CAN")

        assert np.all(design.y[design.valid] == 0.0)

    def test_step_placed_at_lag(self):
        """Test that a unit step in V1 on day s appears once at day s + 21."""
        step_day = 70
        v1 = np.where(np.arange(N_DAYS) >= step_day, 1.0, 0.0)
        design = build_ts_design(_single_country_panel(v1=v1), "CAN")

        column = design.exog[:, design.exog_names.index("dV1_l21")]
        expected = np.flatnonzero(design.dates == pd.Timestamp("2021-01-01") + pd.Timedelta(days=step_day + 21))
        np.testing.assert_array_equal(np.flatnonzero(column), expected)
        assert column.sum() == 1.0

    def test_row_uses_past_only(self):
        """Test that regressor row t depends only on data dated <= t."""
        panel = _single_country_panel()
        design = build_ts_design(panel, "CAN")

        policy = panel.values("policy")[0]
        row = 10
        t = HISTORY + row
        assert design.exog[row, design.exog_names.index("dP_l14")] == pytest.approx(policy[t - 14] - policy[t - 15])

    def test_total_doses_fallback(self):
        """Test that countries without dose-specific series use total doses."""
        panel = _single_country_panel(v1=np.full(N_DAYS, np.nan), v2=np.full(N_DAYS, np.nan), total_doses=np.linspace(0.0, 50.0, N_DAYS))
        design = build_ts_design(panel, "CAN")

        assert "dV_l21" in design.exog_names
        assert "dV1_l21" not in design.exog_names
        assert design.lags["v"] == 21

    def test_interior_gap_kept_as_missing(self):
        """Test that an interior missing day becomes a missing observation."""
        cases = _single_country_panel().values("new_cases_pm")[0].copy()
        cases[HISTORY + 30] = np.nan
        design = build_ts_design(_single_country_panel(new_cases_pm=cases), "CAN")

        # the gap removes the outcome on the missing day and the day after
        assert not design.valid[30]
        assert not design.valid[31]
        assert design.excluded_rows == 2
        assert np.isnan(design.y[30])
        assert not design.exog[30].any()

    def test_zero_counts_floored(self):
        """Test that zero counts are floored before logs and counted."""
        cases = _single_country_panel().values("new_cases_pm")[0].copy()
        cases[HISTORY + 5] = 0.0
        design = build_ts_design(_single_country_panel(new_cases_pm=cases), "CAN")

        assert design.floored_rows == 1
        assert np.isfinite(design.y[design.valid]).all()

    def test_lag_override(self):
        """Test that lag overrides rename and shift the column."""
        design = build_ts_design(_single_country_panel(), "CAN", lag_overrides={"policy": 7})

        assert "dP_l7" in design.exog_names
        assert design.lags["policy"] == 7

    @pytest.mark.parametrize("outcome, overrides", [
        ("hospital", None),
        ("deaths", {"tests": 0}),
        ("cases", {"policy": -1}),
        ("cases", {"unknown": 3}),
    ])
    def test_invalid_arguments(self, outcome, overrides):
        """Test that invalid outcomes and lag overrides raise ValidationError."""
        with pytest.raises(ValidationError):
            build_ts_design(_single_country_panel(), "CAN", outcome=outcome, lag_overrides=overrides)

    def test_insufficient_rows(self):
        """Test that short designs raise InsufficientDataError."""
        with pytest.raises(InsufficientDataError):
            build_ts_design(_single_country_panel(), "CAN", min_rows=N_DAYS)

    def test_outcome_shift(self):
        """Test that shifting log levels leaves the differenced outcome unchanged."""
        design = build_ts_design(_single_country_panel(), "CAN")
        shifted = design.with_outcome_shift(3.0)

        np.testing.assert_allclose(shifted.y, design.y, atol=1e-12)
        np.testing.assert_allclose(shifted.log_level, design.log_level + 3.0)

    def test_synthetic_panel_design(self, synthetic_panel):
        """Test a design on the synthetic panel keeps only window rows."""
        design = build_ts_design(synthetic_panel, "USA")

        assert design.dates[0] >= synthetic_panel.window_start
        assert design.n_obs >= 60
        assert list(design.to_frame().columns[:3]) == ["date", "y", "const"]


@pytest.mark.unit
@pytest.mark.fast
class TestSeriesDesign:
    """Test cases for series_design function."""

    def test_levels_reintegrate(self):
        """Test that levels are cumulated outcomes starting from zero."""
        design = series_design(np.array([0.1, -0.2, 0.3]), exog=np.array([1.0, 2.0, 3.0]))

        np.testing.assert_allclose(design.log_level, [0.1, -0.1, 0.2])
        np.testing.assert_allclose(design.log_level_prev, [0.0, 0.1, -0.1])
        assert design.exog_names == ["const", "x1"]

    def test_term_name(self):
        """Test regressor labels."""
        assert term_name("v1", 21) == "dV1_l21"
        assert term_name("tests", 0) == "dlogT"
