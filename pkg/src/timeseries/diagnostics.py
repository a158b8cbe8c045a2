"""
Residual checks for fitted ARIMA-X models.
"""

from dataclasses import dataclass
from typing import Any, Dict, Sequence

import numpy as np
from statsmodels.stats.diagnostic import acorr_ljungbox
from statsmodels.tsa.stattools import adfuller

from ..log import get_logger
from .arimax import ArimaFit

logger = get_logger(__name__)

LJUNG_BOX_LAGS = (7, 14)
STATIONARITY_LEVEL = 0.05


@dataclass(frozen=True)
class ResidualDiagnostics:
    """
    Residual summary of one fit.

    Attributes:
        n_obs: Residuals used.
        mean: Residual mean.
        variance: Residual variance (population form).
        ljung_box: Lag -> (statistic, p-value); degrees of freedom are
            reduced by p + q.
        adf_statistic: Augmented Dickey-Fuller statistic.
        adf_pvalue: Its p-value.
        stationary: ADF rejects a unit root at the 5% level, or the
            residuals are constant.
        mean_zero: |mean| <= 3 sd / sqrt(n).
    """

    n_obs: int
    mean: float
    variance: float
    ljung_box: Dict[int, tuple]
    adf_statistic: float
    adf_pvalue: float
    stationary: bool
    mean_zero: bool

    def white_noise(self, level: float = 0.05) -> bool:
        """Whether no Ljung-Box test rejects at ``level``."""
        return all(not (pvalue < level) for _, pvalue in self.ljung_box.values())

    def to_record(self) -> Dict[str, Any]:
        return {
            "n_obs": self.n_obs,
            "mean": self.mean,
            "variance": self.variance,
            "ljung_box": {str(lag): {"statistic": stat, "pvalue": pvalue} for lag, (stat, pvalue) in self.ljung_box.items()},
            "adf_statistic": self.adf_statistic,
            "adf_pvalue": self.adf_pvalue,
            "stationary": self.stationary,
            "mean_zero": self.mean_zero,
        }


def residual_diagnostics(fit: ArimaFit, lags: Sequence[int] = LJUNG_BOX_LAGS) -> ResidualDiagnostics:
    """
    Mean, variance, Ljung-Box and stationarity checks of fit residuals.

    Args:
        fit: ARIMA-X fit.
        lags: Ljung-Box lags.

    Returns:
        ResidualDiagnostics: Report; a constant residual series gets NaN test statistics.
    """
    residuals = fit.residuals[np.isfinite(fit.residuals)]
    n_obs = len(residuals)
    mean = float(residuals.mean()) if n_obs else 0.0
    variance = float(residuals.var()) if n_obs else 0.0

    if n_obs == 0 or variance == 0.0:
        report = ResidualDiagnostics(
            n_obs=n_obs,
            mean=mean,
            variance=variance,
            ljung_box={int(lag): (np.nan, np.nan) for lag in lags},
            adf_statistic=np.nan,
            adf_pvalue=np.nan,
            stationary=True,
            mean_zero=mean == 0.0,
        )
        logger.debug("Degenerate residuals", extra={"country": fit.country, "n_obs": n_obs})
        return report

    table = acorr_ljungbox(residuals, lags=list(lags), model_df=fit.order.n_arma, return_df=True)
    ljung_box = {int(lag): (float(table.loc[lag, "lb_stat"]), float(table.loc[lag, "lb_pvalue"])) for lag in lags}

    try:
        adf_statistic, adf_pvalue, *_ = adfuller(residuals, autolag="AIC")
    except (ValueError, np.linalg.LinAlgError) as e:
        logger.warning("ADF test failed", extra={"country": fit.country, "error": str(e)})
        adf_statistic, adf_pvalue = np.nan, np.nan

    report = ResidualDiagnostics(
        n_obs=n_obs,
        mean=mean,
        variance=variance,
        ljung_box=ljung_box,
        adf_statistic=float(adf_statistic),
        adf_pvalue=float(adf_pvalue),
        stationary=bool(adf_pvalue < STATIONARITY_LEVEL),
        mean_zero=bool(abs(mean) <= 3.0 * np.sqrt(variance / n_obs)),
    )
    logger.info("Residual diagnostics", extra={"country": fit.country, "outcome": fit.outcome, **{f"lb_p{lag}": p for lag, (_, p) in ljung_box.items()}, "stationary": report.stationary})
    return report
