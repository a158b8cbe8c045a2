"""
Panel module.
Country fixed-effects regressions of case growth, death growth and mobility.
"""

from .spec import PanelSpec, TREND_DEGREES
from .terms import Term, outcome_term, spec_terms
from .design import PanelDesign, build_panel_design, chinese_flags, panel_sources, weekly_counts
from .estimator import PanelFit, cluster_covariance, fit_fe_ols
from .inference import chinese_vaccine_tests, coefficient_table, linear_combo, stars
from .battery import BatteryResult, default_battery, lag_shift_battery, run_spec_battery

__all__ = [
    "PanelSpec",
    "TREND_DEGREES",
    "Term",
    "outcome_term",
    "spec_terms",
    "PanelDesign",
    "build_panel_design",
    "chinese_flags",
    "panel_sources",
    "weekly_counts",
    "PanelFit",
    "cluster_covariance",
    "fit_fe_ols",
    "chinese_vaccine_tests",
    "coefficient_table",
    "linear_combo",
    "stars",
    "BatteryResult",
    "default_battery",
    "lag_shift_battery",
    "run_spec_battery",
]
