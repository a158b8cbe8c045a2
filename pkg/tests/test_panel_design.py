import pytest
import numpy as np
import pandas as pd

from src.error import BuildError, ValidationError
from src.ingest import ObservationPanel, list_countries
from src.panel.design import PanelDesign, build_panel_design
from src.panel.spec import PanelSpec
from src.panel.terms import Term, spec_terms


@pytest.mark.unit
@pytest.mark.fast
class TestPanelSpec:
    """Test cases for PanelSpec model."""

    def test_default_trends(self):
        """Test outcome-dependent default trends."""
        assert PanelSpec(outcome="cases").trend_degree == 2
        assert PanelSpec(outcome="mobility").trend_degree == 0
        assert PanelSpec(outcome="deaths", trend="cubic").trend_degree == 3

    @pytest.mark.parametrize("kwargs", [
        {"outcome": "mobility", "interactions": "vaccine_mobility"},
        {"outcome": "cases", "info_variables": "deaths"},
        {"lag_shift": 4},
        {"frequency": "weekly", "lag_shift": 1},
        {"trend": "quartic"},
        {"window": ("2021-01-10", "2021-01-01")},
    ])
    def test_invalid(self, kwargs):
        """Test that inconsistent specifications raise ValidationError."""
        with pytest.raises(ValidationError):
            PanelSpec(**kwargs)


@pytest.mark.unit
@pytest.mark.fast
class TestSpecTerms:
    """Test cases for spec_terms function."""

    def test_case_terms(self):
        """Test the case-growth regressors."""
        names = [term.name for term in spec_terms(PanelSpec(outcome="cases"))]

        assert names == ["V1_l21", "V2_l7", "P_l14", "M_l14", "dlogdC_l14", "logdC_l14", "dlogdT"]

    def test_death_terms_with_chinese(self):
        """Test the death-growth regressors with Chinese-vaccine terms."""
        names = [term.name for term in spec_terms(PanelSpec(outcome="deaths", include_chinese_terms=True))]

        assert names == ["V1_l35", "V2_l21", "V1CHN_l35", "V2CHN_l21", "P_l28", "M_l28", "dlogdD_l28", "logdD_l28"]

    def test_mobility_terms(self):
        """Test the mobility regressors with Chinese terms and death information."""
        names = [term.name for term in spec_terms(PanelSpec(outcome="mobility", include_chinese_terms=True, info_variables="deaths"))]

        assert names == ["dV1", "dV2", "V1_l7", "V2_l7", "dV1CHN", "dV2CHN", "V1CHN_l7", "V2CHN_l7", "dP", "P_l7", "dlogdD", "logdD", "M_l7"]

    def test_lag_shift_and_interactions(self):
        """Test shifted vaccine lags and vaccine x mobility interactions."""
        names = [term.name for term in spec_terms(PanelSpec(outcome="cases", lag_shift=-2, interactions="vaccine_mobility"))]

        assert names[:2] == ["V1_l19", "V2_l5"]
        assert names[-2:] == ["V1xM_l14", "V2xM_l14"]

    def test_term_values(self):
        """Test level, change, partner and Chinese term arithmetic."""
        sources = {"v1": np.arange(20.0)[None, :] ** 2, "mobility": np.full((1, 20), 2.0)}
        change = Term("v1", 3, "change").values(sources)
        partner = Term("v1", 3, partner="mobility").values(sources)
        chinese = Term("v1", 3, chinese=True).values(sources, chinese=np.array([0.0]))

        assert change[0, 12] == pytest.approx(9.0**2 - 2.0**2)
        assert np.isnan(change[0, 9])
        assert partner[0, 12] == pytest.approx(2.0 * 81.0)
        assert chinese[0, 12] == 0.0
        assert Term("v1", 3, "change").value_at({"v1": sources["v1"][0]}, 12) == pytest.approx(change[0, 12])


def _random_design(n_countries, n_rows, spec):
    codes = list_countries("panel")[:n_countries]
    countries = np.repeat(np.array(codes, dtype=object), n_rows)
    dates = pd.DatetimeIndex(np.tile(pd.date_range("2021-01-01", periods=n_rows).to_numpy(), n_countries))
    rng = np.random.default_rng(0)
    return PanelDesign(
        spec=spec,
        terms=[],
        names=["a", "b"],
        y=rng.normal(size=len(countries)),
        x=rng.normal(size=(len(countries), 2)),
        countries=countries,
        dates=dates,
        time=np.tile(np.linspace(0.0, 1.0, n_rows), n_countries),
        country_order=tuple(codes),
    )


@pytest.mark.unit
@pytest.mark.fast
class TestBuildPanelDesign:
    """Test cases for build_panel_design function."""

    def test_case_design(self, synthetic_panel):
        """Test that a case design covers every country within the window."""
        design = build_panel_design(synthetic_panel, PanelSpec(outcome="cases"))

        assert design.names == [term.name for term in spec_terms(design.spec)]
        assert set(design.countries) == set(synthetic_panel.countries)
        assert design.dates.min() >= synthetic_panel.window_start
        assert np.isfinite(design.x).all()
        assert design.time.min() >= 0.0 and design.time.max() <= 1.0

    def test_outcome_identity(self, synthetic_panel):
        """Test that the outcome is log dC_t - log dC_{t-7} with dC from cumulative cases."""
        design = build_panel_design(synthetic_panel, PanelSpec(outcome="cases"))
        cumulative = synthetic_panel.series("GBR", "cum_cases")
        weekly = cumulative - cumulative.shift(7)
        expected = np.log(weekly) - np.log(weekly.shift(7))

        rows = design.countries == "GBR"
        np.testing.assert_allclose(design.y[rows], expected.loc[design.dates[rows]].to_numpy(), rtol=0, atol=1e-12)

    def test_chinese_columns_zero_elsewhere(self, synthetic_panel):
        """Test that Chinese-vaccine columns vanish for other countries."""
        design = build_panel_design(synthetic_panel, PanelSpec(outcome="cases", include_chinese_terms=True))
        column = design.x[:, design.names.index("V1CHN_l21")]

        assert not column[design.countries == "CAN"].any()
        chile = design.countries == "CHL"
        np.testing.assert_array_equal(column[chile], design.x[chile, design.names.index("V1_l21")])

    def test_nonpositive_counts_masked(self, synthetic_panel):
        """Test that weeks without new cases are masked and counted."""
        frame = synthetic_panel.frame.copy()
        rows = np.flatnonzero(frame["country"] == "DEU")
        flat = rows[200:215]
        frame.loc[flat, "cum_cases"] = frame.loc[rows[199], "cum_cases"]
        panel = ObservationPanel(frame=frame, countries=synthetic_panel.countries, dates=synthetic_panel.dates, window_start=synthetic_panel.window_start)
        design = build_panel_design(panel, PanelSpec(outcome="cases"))

        assert design.nonpositive_counts["DEU"] > 0
        assert design.nonpositive_counts["CAN"] == 0
        assert design.drop_counts["DEU"] > design.drop_counts["CAN"]

    def test_empty_design(self, synthetic_panel):
        """Test that a window without complete rows raises BuildError."""
        spec = PanelSpec(outcome="cases", window=(synthetic_panel.dates[0].date(), synthetic_panel.dates[5].date()))

        with pytest.raises(BuildError) as exc_info:
            build_panel_design(synthetic_panel, spec)

        assert set(exc_info.value.drop_counts) == set(synthetic_panel.countries)

    def test_window_outside_panel(self, synthetic_panel):
        """Test that a window beyond the panel raises ValidationError."""
        spec = PanelSpec(outcome="cases", window=("2020-01-01", "2021-07-08"))

        with pytest.raises(ValidationError):
            build_panel_design(synthetic_panel, spec)

    def test_weekly_design(self, synthetic_panel):
        """Test that weekly specifications aggregate a daily panel."""
        design = build_panel_design(synthetic_panel, PanelSpec(outcome="deaths", frequency="weekly"))

        assert design.names[:2] == ["V1_l35", "V2_l21"]
        assert (np.diff(np.unique(design.dates)).astype("timedelta64[D]").astype(int) == 7).all()

    def test_mobility_design(self, synthetic_panel):
        """Test the mobility design outcome is the mobility index."""
        design = build_panel_design(synthetic_panel, PanelSpec(outcome="mobility"))
        rows = design.countries == "USA"
        mobility = synthetic_panel.series("USA", "mobility_index")

        np.testing.assert_allclose(design.y[rows], mobility.loc[design.dates[rows]].to_numpy())

    def test_trend_block_width(self):
        """Test that quadratic trends over 37 countries give 74 columns."""
        design = _random_design(37, 5, PanelSpec(outcome="cases", trend="quadratic"))
        block, names = design.trend_block()

        assert block.shape == (37 * 5, 74)
        assert names[:2] == [f"trend_{design.country_order[0]}_1", f"trend_{design.country_order[0]}_2"]
        assert design.dummy_block()[0].shape == (37 * 5, 37)
