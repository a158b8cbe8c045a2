import pytest
import numpy as np

from src.panel.battery import default_battery, lag_shift_battery, run_spec_battery
from src.panel.design import build_panel_design
from src.panel.estimator import fit_fe_ols
from src.panel.spec import PanelSpec


@pytest.mark.unit
@pytest.mark.fast
class TestBatteryDefinition:
    """Test cases for default_battery and lag_shift_battery functions."""

    def test_lag_shifts(self):
        """Test seven lag-shift variants with the baseline at zero."""
        variants = lag_shift_battery(PanelSpec(outcome="cases"))

        assert [name for name, _ in variants] == ["shift_-3", "shift_-2", "shift_-1", "baseline", "shift_+1", "shift_+2", "shift_+3"]
        assert variants[3][1].lag_shift == 0

    def test_default_case_battery(self):
        """Test the variants of the case battery."""
        names = [name for name, _ in default_battery(PanelSpec(outcome="cases"))]

        assert names[0] == "baseline"
        assert {"trend_none", "trend_linear", "trend_cubic", "window_early", "window_late", "weekly", "interactions", "chinese_extended"} <= set(names)
        assert "trend_quadratic" not in names
        assert len(names) == len(set(names))

    def test_mobility_battery(self):
        """Test that mobility batteries skip lag shifts and interactions."""
        names = [name for name, _ in default_battery(PanelSpec(outcome="mobility"))]

        assert "interactions" not in names
        assert not any(name.startswith("shift_") for name in names)
        assert "trend_linear" in names


@pytest.mark.integration
class TestRunSpecBattery:
    """Test cases for run_spec_battery function."""

    def test_single_baseline(self, synthetic_panel):
        """Test that a one-variant battery equals the direct fit."""
        spec = PanelSpec(outcome="cases")
        result = run_spec_battery(synthetic_panel, spec, variants=[("baseline", spec)])
        direct = fit_fe_ols(build_panel_design(synthetic_panel, spec))

        np.testing.assert_array_equal(result.fits["baseline"].params, direct.params)
        np.testing.assert_array_equal(result.fits["baseline"].cov, direct.cov)

    def test_failures_recorded(self, synthetic_panel):
        """Test that failing variants are recorded while the battery continues."""
        result = run_spec_battery(synthetic_panel, PanelSpec(outcome="deaths"))

        # the synthetic panel starts after the early and late window starts
        assert result.errors["window_early"]["code"] == "VAL_ERR"
        assert "window_late" in result.errors
        assert "baseline" in result.fits and "weekly" in result.fits
        table = result.table()
        assert list(dict.fromkeys(table["variant"])) == [name for name in result.variants if name in result.fits]

    @pytest.mark.slow
    def test_parallel_matches_serial(self, synthetic_panel):
        """Test that worker count does not change results or order."""
        spec = PanelSpec(outcome="cases")
        variants = lag_shift_battery(spec)
        serial = run_spec_battery(synthetic_panel, spec, variants=variants, jobs=1)
        parallel = run_spec_battery(synthetic_panel, spec, variants=variants, jobs=2)

        assert serial.variants == parallel.variants
        for name in serial.variants:
            np.testing.assert_array_equal(serial.fits[name].params, parallel.fits[name].params)
