from .design import CASE_LAGS, DEATH_LAGS, MIN_USABLE_ROWS, TsDesign, build_ts_design, default_lags, series_design, term_name
from .arimax import ArimaFit, ArimaOrder, ar_ma_roots, fit_arimax, fitted_path, order_grid, select_order
from .diagnostics import ResidualDiagnostics, residual_diagnostics

__all__ = [
    "CASE_LAGS",
    "DEATH_LAGS",
    "MIN_USABLE_ROWS",
    "TsDesign",
    "build_ts_design",
    "default_lags",
    "series_design",
    "term_name",
    "ArimaFit",
    "ArimaOrder",
    "ar_ma_roots",
    "fit_arimax",
    "fitted_path",
    "order_grid",
    "select_order",
    "ResidualDiagnostics",
    "residual_diagnostics",
]
