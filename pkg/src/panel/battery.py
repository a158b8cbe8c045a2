"""
Robustness battery of panel specifications.
"""

from dataclasses import dataclass, field
from datetime import date
from typing import Any, Dict, List, Sequence, Tuple

import pandas as pd
from joblib import Parallel, delayed

from ..error import BaseError
from ..ingest import ObservationPanel
from ..log import get_logger
from .design import build_panel_design
from .estimator import PanelFit, fit_fe_ols
from .inference import coefficient_table
from .spec import MAX_LAG_SHIFT, PanelSpec

logger = get_logger(__name__)

EARLY_WINDOW: Tuple[date, date] = (date(2020, 7, 1), date(2021, 7, 8))
LATE_WINDOW: Tuple[date, date] = (date(2020, 6, 1), date(2021, 5, 31))

Variant = Tuple[str, PanelSpec]


def _variant(base: PanelSpec, update: Dict[str, Any]) -> PanelSpec:
    return PanelSpec.model_validate({**base.model_dump(), **update})


def default_battery(base: PanelSpec) -> List[Variant]:
    """
    Standard robustness variants of a base specification.

    Trend degrees, vaccine lag shifts of +-1..3 days, early and late windows,
    weekly frequency, vaccine x mobility interactions and the extended
    Chinese-vaccine set. Variants that do not apply to the base outcome are
    left out.
    """
    variants: List[Variant] = [("baseline", base)]
    for trend in ("none", "linear", "quadratic", "cubic"):
        if trend != base.trend_name:
            variants.append((f"trend_{trend}", _variant(base, {"trend": trend})))
    if base.outcome != "mobility":
        variants += lag_shift_battery(base, include_baseline=False)
    variants.append(("window_early", _variant(base, {"window": EARLY_WINDOW})))
    variants.append(("window_late", _variant(base, {"window": LATE_WINDOW})))
    if base.lag_shift == 0:
        variants.append(("weekly", _variant(base, {"frequency": "weekly"})))
    if base.outcome != "mobility" and base.interactions == "none":
        variants.append(("interactions", _variant(base, {"interactions": "vaccine_mobility"})))
    if base.chinese_set == "baseline":
        variants.append(("chinese_extended", _variant(base, {"include_chinese_terms": True, "chinese_set": "extended"})))
    return variants


def lag_shift_battery(base: PanelSpec, include_baseline: bool = True) -> List[Variant]:
    """Variants shifting both vaccine lags by -3..+3 days."""
    shifts = [s for s in range(-MAX_LAG_SHIFT, MAX_LAG_SHIFT + 1) if include_baseline or s != 0]
    return [(f"shift_{s:+d}" if s else "baseline", _variant(base, {"lag_shift": s})) for s in shifts]


@dataclass(frozen=True)
class BatteryResult:
    """
    Fits of a specification battery.

    Attributes:
        variants: Variant names in battery order.
        fits: Variant -> fit, for variants that succeeded.
        errors: Variant -> error record, for variants that failed.
    """

    variants: List[str]
    fits: Dict[str, PanelFit] = field(default_factory=dict)
    errors: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    def table(self) -> pd.DataFrame:
        """Coefficients of every successful variant, keyed by variant."""
        frames = []
        for name in self.variants:
            if name not in self.fits:
                continue
            fit = self.fits[name]
            frame = coefficient_table(fit)
            frame.insert(0, "variant", name)
            frame["spec"] = fit.spec.label()
            frame["n_obs"] = fit.n_obs
            frame["obs_per_country"] = fit.obs_per_country
            frames.append(frame)
        if not frames:
            return pd.DataFrame(columns=["variant", "name", "estimate", "std_error", "t", "p", "stars", "spec", "n_obs", "obs_per_country"])
        return pd.concat(frames, ignore_index=True)


def _run_variant(panel: ObservationPanel, spec: PanelSpec) -> Tuple[PanelFit | None, Dict[str, Any] | None]:
    try:
        return fit_fe_ols(build_panel_design(panel, spec)), None
    except BaseError as e:
        return None, e.to_record()


def run_spec_battery(panel: ObservationPanel, base_spec: PanelSpec, variants: Sequence[Variant] | None = None, jobs: int = 1) -> BatteryResult:
    """
    Fit every variant of a battery.

    Failing variants are recorded and do not stop the battery; results keep
    the battery order whatever the completion order.

    Args:
        panel: Observation panel.
        base_spec: Base specification; used when ``variants`` is None.
        variants: (name, spec) pairs; defaults to ``default_battery(base_spec)``.
        jobs: Worker count.

    Returns:
        BatteryResult: Fits and error records by variant.
    """
    variants = list(variants) if variants is not None else default_battery(base_spec)
    outcomes = Parallel(n_jobs=jobs)(delayed(_run_variant)(panel, spec) for _, spec in variants)

    fits: Dict[str, PanelFit] = {}
    errors: Dict[str, Dict[str, Any]] = {}
    for (name, _), (fit, error) in zip(variants, outcomes):
        if fit is not None:
            fits[name] = fit
        else:
            errors[name] = error
            logger.warning("Battery variant failed", extra={"variant": name, "error": error})
    logger.info("Specification battery finished", extra={"variants": len(variants), "failed": len(errors)})
    return BatteryResult(variants=[name for name, _ in variants], fits=fits, errors=errors)
