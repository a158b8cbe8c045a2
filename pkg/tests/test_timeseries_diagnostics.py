import pytest
import numpy as np
from statsmodels.tsa.arima_process import ArmaProcess

from src.timeseries.arimax import ArimaOrder, fit_arimax
from src.timeseries.design import series_design
from src.timeseries.diagnostics import residual_diagnostics


@pytest.mark.unit
@pytest.mark.fast
class TestResidualDiagnostics:
    """Test cases for residual_diagnostics function."""

    def test_white_noise_residuals(self):
        """Test that i.i.d. residuals pass the checks."""
        rng = np.random.default_rng(12)
        fit = fit_arimax(series_design(rng.normal(size=500)))
        report = residual_diagnostics(fit)

        assert report.n_obs == 500
        assert set(report.ljung_box) == {7, 14}
        assert report.mean == pytest.approx(0.0, abs=1e-12)
        assert report.mean_zero
        assert report.stationary

    def test_underfit_ar2_rejects(self):
        """Test that fitting (0,1,0) to AR(2) errors leaves autocorrelated residuals."""
        process = ArmaProcess(np.r_[1.0, -0.5, -0.3], np.r_[1.0])
        y = process.generate_sample(nsample=600, distrvs=np.random.default_rng(4).standard_normal, burnin=200)
        report = residual_diagnostics(fit_arimax(series_design(y), ArimaOrder(p=0, q=0)))

        assert report.ljung_box[7][1] < 0.05
        assert not report.white_noise()

    def test_zero_residuals(self):
        """Test that zero residuals give zero moments and NaN statistics."""
        rng = np.random.default_rng(1)
        exog = rng.normal(size=(100, 1))
        fit = fit_arimax(series_design(2.0 * exog[:, 0], exog=exog))
        report = residual_diagnostics(fit)

        assert report.mean == pytest.approx(0.0, abs=1e-12)
        assert report.variance == pytest.approx(0.0, abs=1e-20)

    def test_degenerate_report(self, mocker):
        """Test the report for an exactly constant residual vector."""
        fit = mocker.Mock(residuals=np.zeros(50), country="SIM", outcome="cases")
        report = residual_diagnostics(fit)

        assert report.mean == 0.0
        assert report.variance == 0.0
        assert np.isnan(report.ljung_box[7][0])
        assert report.stationary
        assert np.isnan(report.to_record()["ljung_box"]["14"]["pvalue"])

    @pytest.mark.slow
    def test_ljung_box_size(self):
        """Test that Ljung-Box rejects i.i.d. residuals in about 5% of seeds."""
        rejections = 0
        for seed in range(200):
            fit = fit_arimax(series_design(np.random.default_rng(seed).normal(size=300)))
            rejections += residual_diagnostics(fit).ljung_box[7][1] < 0.05

        assert 2 <= rejections <= 22
