"""
Counterfactual outcome paths under a hypothetical dosing schedule.

Paths are computed in deviation form. With coefficients b of the outcome
equation and c of the mobility equation, for every day t from the
divergence day on:

    log*_t = log_t + (log*_{t-7} - log_{t-7}) + sum_k b_k (x*_{k,t} - x_{k,t})
    M*_t   = M_t + sum_k c_k (z*_{k,t} - z_{k,t})

which is the regression recursion with each replication's residual against
observed data re-added. The outcome at t reads mobility at its equation lag
and mobility at t reads the outcome at t, so each day the outcome is updated
before mobility. Fixed effects, trends, policy and test growth stay at
observed values; mobility coefficients stay at point estimates.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from ..error import SimulationError
from ..ingest import ObservationPanel
from ..log import get_logger
from ..panel import PanelFit, Term, chinese_flags, panel_sources
from .scenario import SWEEP_INTERVALS, Scenario
from .schedule import CfSchedule, make_schedule

logger = get_logger(__name__)

WEEK_DAYS = 7
BAND_PERCENTILES = (5.0, 95.0)
MIN_BAND_DRAWS = 20
_PSD_TOL = 1e-12

_FLOW_COLUMNS = {"cases": "new_cases_pm", "deaths": "new_deaths_pm"}


@dataclass(frozen=True)
class CounterfactualResult:
    """
    Counterfactual paths of one outcome for one country.

    Log paths are log weekly counts; level paths are daily counts per million,
    or people when the scenario carries a population.

    Attributes:
        country: Country code.
        outcome: "cases" or "deaths".
        dates: Simulated days.
        observed: Observed log weekly count.
        mean: Mean counterfactual log weekly count across replications.
        p5: 5th percentile across replications.
        p95: 95th percentile across replications.
        observed_level: Observed daily count.
        level_mean: Mean counterfactual daily count.
        level_p5: 5th percentile of the daily count.
        level_p95: 95th percentile of the daily count.
        mobility_observed: Observed mobility index.
        mobility_mean: Mean counterfactual mobility index.
        paths: Log paths per replication (draws x days).
        schedule: Counterfactual dosing schedule.
        scenario: Scenario echo.
        units: "per_million" or "people".
        warnings: Non-fatal issues found while simulating.
    """

    country: str
    outcome: str
    dates: pd.DatetimeIndex
    observed: np.ndarray
    mean: np.ndarray
    p5: np.ndarray
    p95: np.ndarray
    observed_level: np.ndarray
    level_mean: np.ndarray
    level_p5: np.ndarray
    level_p95: np.ndarray
    mobility_observed: np.ndarray
    mobility_mean: np.ndarray
    paths: np.ndarray
    schedule: CfSchedule
    scenario: Scenario
    units: str = "per_million"
    warnings: List[str] = field(default_factory=list)

    @property
    def delta(self) -> np.ndarray:
        """Mean counterfactual minus observed, log scale."""
        return self.mean - self.observed

    @property
    def level_delta(self) -> np.ndarray:
        return self.level_mean - self.observed_level

    @property
    def draws(self) -> int:
        return self.paths.shape[0]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "date": self.dates,
            "observed": self.observed,
            "cf_mean": self.mean,
            "cf_p5": self.p5,
            "cf_p95": self.p95,
            "delta": self.delta,
            "level_observed": self.observed_level,
            "level_cf_mean": self.level_mean,
            "level_cf_p5": self.level_p5,
            "level_cf_p95": self.level_p95,
        })

    def to_record(self) -> Dict[str, Any]:
        return {
            "country": self.country,
            "outcome": self.outcome,
            "start": str(self.dates[0].date()),
            "end": str(self.dates[-1].date()),
            "draws": self.draws,
            "units": self.units,
            "scenario": self.scenario.to_record(),
            "schedule": self.schedule.to_record(),
            "warnings": list(self.warnings),
        }


def draw_coefficients(fit: PanelFit, draws: int, seed: int, sample: bool = True) -> Tuple[np.ndarray, List[str]]:
    """
    Coefficient replications from the asymptotic normal of a panel fit.

    Replication j is drawn with the generator seeded by (seed, j), so any
    subset of replications can be regenerated on its own. A covariance that
    is not positive semidefinite is repaired by clipping its eigenvalues at 0.

    Args:
        fit: Panel fit with clustered covariance.
        draws: Number of replications.
        seed: Base seed.
        sample: False repeats the point estimates.

    Returns:
        Tuple[np.ndarray, List[str]]: (draws x coefficients) array and warnings.

    Raises:
        SimulationError: If the covariance is not finite.
    """
    params = np.asarray(fit.params, dtype=float)
    if not sample:
        return np.tile(params, (draws, 1)), []

    cov = np.asarray(fit.cov, dtype=float)
    if not np.isfinite(cov).all():
        raise SimulationError(f"Covariance of the {fit.spec.outcome} fit is not finite; cannot draw coefficients")

    warnings: List[str] = []
    eigval, eigvec = np.linalg.eigh((cov + cov.T) / 2.0)
    if eigval.min() < -_PSD_TOL * max(abs(eigval.max()), 1.0):
        message = f"Covariance of the {fit.spec.outcome} fit is not positive semidefinite; eigenvalues clipped at 0"
        logger.warning(message, extra={"min_eigenvalue": float(eigval.min())})
        warnings.append(message)
    root = eigvec * np.sqrt(np.clip(eigval, 0.0, None))

    rows = [params + root @ np.random.default_rng([seed, j]).standard_normal(len(params)) for j in range(draws)]
    return np.stack(rows), warnings


def _deviation(terms: Sequence[Tuple[int, Term]], coefs: np.ndarray, star: Mapping[str, np.ndarray], observed: Mapping[str, np.ndarray], t: int, flag: float) -> np.ndarray:
    total = np.zeros(coefs.shape[0])
    for k, term in terms:
        total += coefs[:, k] * (term.value_at(star, t, flag) - term.value_at(observed, t, flag))
    return total


def _run_paths(
    coefs: np.ndarray,
    terms: Sequence[Term],
    mobility_coefs: np.ndarray,
    mobility_terms: Sequence[Term],
    observed: Dict[str, np.ndarray],
    schedule: CfSchedule,
    outcome: str,
    flags: Tuple[float, float],
    first: int,
    last: int,
) -> Tuple[np.ndarray, np.ndarray]:
    n_draws = coefs.shape[0]
    moved = {"v1", "v2", "mobility", outcome}
    star = dict(observed)
    star["v1"], star["v2"] = schedule.v1, schedule.v2
    star[outcome] = np.tile(observed[outcome], (n_draws, 1))
    star["mobility"] = np.tile(observed["mobility"], (n_draws, 1))

    active = [(k, term) for k, term in enumerate(terms) if moved & set(term.sources)]
    mobility_active = [(k, term) for k, term in enumerate(mobility_terms) if moved & set(term.sources)]
    mobility_coefs = np.broadcast_to(mobility_coefs, (n_draws, len(mobility_terms)))

    for t in range(first, last + 1):
        carried = star[outcome][:, t - WEEK_DAYS] - observed[outcome][t - WEEK_DAYS]
        star[outcome][:, t] = observed[outcome][t] + carried + _deviation(active, coefs, star, observed, t, flags[0])
        star["mobility"][:, t] = observed["mobility"][t] + _deviation(mobility_active, mobility_coefs, star, observed, t, flags[1])

    return star[outcome][:, first : last + 1], star["mobility"][:, first : last + 1]


def _check_fits(fit: PanelFit, mobility_fit: PanelFit, outcome: str) -> None:
    if fit.spec.outcome != outcome:
        raise SimulationError(f"Expected a {outcome} fit, got outcome '{fit.spec.outcome}'")
    if mobility_fit.spec.outcome != "mobility":
        raise SimulationError(f"Expected a mobility fit, got outcome '{mobility_fit.spec.outcome}'")
    if mobility_fit.spec.info_source != outcome:
        raise SimulationError(f"Mobility fit uses {mobility_fit.spec.info_source} information; {outcome} paths need info_variables='{outcome}'")
    for item in (fit, mobility_fit):
        if item.spec.frequency != "daily":
            raise SimulationError("Counterfactual paths need daily fits")
        if [term.name for term in item.terms] != list(item.names):
            raise SimulationError(f"Fit coefficients do not match the terms of '{item.spec.label()}'")


def _window(panel: ObservationPanel, scenario: Scenario) -> Tuple[int, int]:
    start = pd.Timestamp(scenario.start)
    end = pd.Timestamp(scenario.end) if scenario.end is not None else panel.dates[-1]
    if start < panel.window_start or end > panel.dates[-1]:
        raise SimulationError(f"Scenario {start.date()}..{end.date()} outside the panel window {panel.window_start.date()}..{panel.dates[-1].date()}")
    first = panel.date_position(start)
    last = int(panel.dates.searchsorted(end, side="right")) - 1
    if last < first:
        raise SimulationError(f"Scenario {start.date()}..{end.date()} contains no panel date")
    return first, last


def _simulate(
    fit: PanelFit,
    mobility_fit: PanelFit,
    panel: ObservationPanel,
    scenario: Scenario,
    outcome: str,
    schedule: CfSchedule | None,
    jobs: int,
) -> CounterfactualResult:
    _check_fits(fit, mobility_fit, outcome)
    if panel.frequency != "daily":
        raise SimulationError("Counterfactual paths need a daily panel")

    local = panel.subset([scenario.country])
    code = local.countries[0]
    first, last = _window(local, scenario)
    sources, _ = panel_sources(local)
    observed = {name: values[0] for name, values in sources.items()}

    depth = max(term.depth for term in [*fit.terms, *mobility_fit.terms, Term(outcome, WEEK_DAYS)])
    if first < depth:
        raise SimulationError(f"Scenario start needs {depth} days of history before it (panel has {first})")
    span = slice(first - depth, last + 1)
    if not np.isfinite(observed["mobility"][span]).all():
        raise SimulationError(f"Country '{code}' lacks mobility data over the scenario window")
    if not np.isfinite(observed[outcome][span]).all():
        raise SimulationError(f"Country '{code}' has non-positive or missing weekly {outcome} over the scenario window")

    if schedule is None:
        schedule = make_schedule(observed["v1"], observed["v2"], scenario.interval_weeks, scenario.v1_cap, start_index=first, dates=local.dates)
    elif len(schedule.v1) != len(local.dates):
        raise SimulationError(f"Schedule covers {len(schedule.v1)} days, the panel {len(local.dates)}")

    warnings: List[str] = []
    if scenario.sample_parameters and scenario.draws < MIN_BAND_DRAWS:
        message = f"Only {scenario.draws} draws; percentile bands are unreliable below {MIN_BAND_DRAWS}"
        logger.warning(message, extra={"country": code, "outcome": outcome})
        warnings.append(message)

    coefs, draw_warnings = draw_coefficients(fit, scenario.draws, scenario.seed, scenario.sample_parameters)
    warnings += draw_warnings
    flags = (
        float(chinese_flags((code,), fit.spec.chinese_set)[0]),
        float(chinese_flags((code,), mobility_fit.spec.chinese_set)[0]),
    )

    chunks = [chunk for chunk in np.array_split(np.arange(scenario.draws), max(min(jobs, scenario.draws), 1)) if chunk.size]
    runs = Parallel(n_jobs=len(chunks))(
        delayed(_run_paths)(coefs[chunk], fit.terms, mobility_fit.params, mobility_fit.terms, observed, schedule, outcome, flags, first, last)
        for chunk in chunks
    )
    paths = np.concatenate([run[0] for run in runs], axis=0)
    mobility_paths = np.concatenate([run[1] for run in runs], axis=0)

    scale = scenario.population if scenario.population is not None else 1.0
    observed_log = observed[outcome][first : last + 1]
    flow = local.values(_FLOW_COLUMNS[outcome])[0, first : last + 1] * scale
    levels = flow * np.exp(paths - observed_log)

    low, high = np.percentile(paths, BAND_PERCENTILES, axis=0)
    level_low, level_high = np.percentile(levels, BAND_PERCENTILES, axis=0)
    result = CounterfactualResult(
        country=code,
        outcome=outcome,
        dates=local.dates[first : last + 1],
        observed=observed_log,
        mean=paths.mean(axis=0),
        p5=low,
        p95=high,
        observed_level=flow,
        level_mean=levels.mean(axis=0),
        level_p5=level_low,
        level_p95=level_high,
        mobility_observed=observed["mobility"][first : last + 1],
        mobility_mean=mobility_paths.mean(axis=0),
        paths=paths,
        schedule=schedule,
        scenario=scenario,
        units="people" if scenario.population is not None else "per_million",
        warnings=warnings,
    )
    logger.info(
        "Counterfactual simulated",
        extra={"country": code, "outcome": outcome, "scenario": scenario.label(), "draws": scenario.draws, "mean_delta": float(result.delta.mean())},
    )
    return result


def simulate_paths(
    case_fit: PanelFit,
    mobility_fit: PanelFit,
    panel: ObservationPanel,
    scenario: Scenario,
    schedule: CfSchedule | None = None,
    jobs: int = 1,
) -> CounterfactualResult:
    """
    Counterfactual case paths with pointwise 90% bands.

    Args:
        case_fit: Case-growth fit; its coefficients are drawn per replication.
        mobility_fit: Mobility fit with case information variables; kept at
            point estimates.
        panel: Daily observation panel containing the scenario country.
        scenario: Dosing scenario.
        schedule: Explicit schedule over the panel dates; built from the
            scenario when omitted.
        jobs: Worker count for the replications; results do not depend on it.

    Returns:
        CounterfactualResult: Mean path, bands and level paths.

    Raises:
        SimulationError: If the fits, panel or window cannot support the simulation.
    """
    return _simulate(case_fit, mobility_fit, panel, scenario, "cases", schedule, jobs)


def death_paths(
    death_fit: PanelFit,
    mobility_fit: PanelFit,
    panel: ObservationPanel,
    scenario: Scenario,
    schedule: CfSchedule | None = None,
    jobs: int = 1,
) -> CounterfactualResult:
    """Counterfactual death paths; as ``simulate_paths`` with the death equation and death information in mobility."""
    return _simulate(death_fit, mobility_fit, panel, scenario, "deaths", schedule, jobs)


def scenario_sweep(
    case_fit: PanelFit,
    mobility_fit: PanelFit,
    panel: ObservationPanel,
    scenario: Scenario,
    intervals: Sequence[int] = SWEEP_INTERVALS,
    jobs: int = 1,
) -> Dict[int, CounterfactualResult]:
    """
    Counterfactual paths for several dosing intervals.

    The fit's outcome selects case or death paths.

    Returns:
        Dict[int, CounterfactualResult]: Result per interval in weeks, in the given order.
    """
    outcome = case_fit.spec.outcome
    results: Dict[int, CounterfactualResult] = {}
    for weeks in intervals:
        variant = Scenario.model_validate({**scenario.model_dump(), "interval_weeks": weeks})
        results[weeks] = _simulate(case_fit, mobility_fit, panel, variant, outcome, None, jobs)
    return results
