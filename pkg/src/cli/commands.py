"""
Runners behind the CLI subcommands.

Each runner takes a validated configuration and an output directory, writes
its result files there and returns their paths. Runners never read the clock
or the environment, so identical configurations give identical files.
"""

from pathlib import Path
from typing import Callable, Dict, List, Tuple, Type

import pandas as pd

from ..allocation import EfficacyProfile, protection_table, simulate_rollout
from ..counterfactual import Scenario, death_paths, render_chart, simulate_paths, summarize
from ..file import read_json, write_frame_csv, write_json
from ..ingest import IDENTITY_SCHEMA, build_panel, coverage_report, load_raw, read_panel_csv, synthetic_inputs, weekly_aggregate, write_panel_csv
from ..ingest.schema import KEY_COLUMNS, VALUE_COLUMNS
from ..log import get_logger
from ..panel import PanelFit, PanelSpec, chinese_vaccine_tests, coefficient_table, default_battery, fit_fe_ols, build_panel_design, lag_shift_battery, run_spec_battery
from ..timeseries import ArimaOrder, build_ts_design, fit_arimax, fitted_path, residual_diagnostics, select_order
from .config import (
    AllocConfig,
    BatteryConfig,
    CounterfactualConfig,
    IngestConfig,
    PanelFitConfig,
    RunConfig,
    SynthConfig,
    TsFitConfig,
)

logger = get_logger(__name__)

Runner = Callable[[RunConfig, Path], List[Path]]


def _dated(frame: pd.DataFrame, column: str = "date") -> pd.DataFrame:
    frame = frame.copy()
    frame[column] = pd.DatetimeIndex(frame[column]).strftime("%Y-%m-%d")
    return frame


def run_ingest(config: IngestConfig, out: Path) -> List[Path]:
    schema = IDENTITY_SCHEMA if config.schema_name == "identity" else None
    tables = [load_raw(path, schema) for path in config.inputs]
    panel = build_panel(tables, (config.start, config.end), config.countries, config.history_days, config.jobs, config.unknown_countries)

    report = {
        "window": [config.start, config.end],
        "history_days": config.history_days,
        "countries": list(panel.countries),
        "coverage": coverage_report(panel),
        "imputed": panel.imputed,
        "violations": {path: table.report.to_record() for path, table in zip(config.inputs, tables)},
    }
    return [write_panel_csv(panel, out / "panel.csv"), write_json(out / "coverage.json", report)]


def run_synth(config: SynthConfig, out: Path) -> List[Path]:
    table = synthetic_inputs(config.countries, (config.start, config.end), config.seed, config.history_days)
    return [write_frame_csv(out / "raw.csv", _dated(table.frame), columns=[*KEY_COLUMNS, *VALUE_COLUMNS])]


def run_alloc(config: AllocConfig, out: Path) -> List[Path]:
    profile = EfficacyProfile(ve1=config.ve1, ve2=config.ve2)
    schedule = simulate_rollout(config.stock, config.capacity, config.interval, config.horizon, config.split_rule)
    return [
        write_frame_csv(out / "alloc.csv", schedule.to_frame(profile), columns=["day", "v1", "v2", "protection"]),
        write_frame_csv(out / "protection_table.csv", protection_table(profile)),
    ]


def run_ts_fit(config: TsFitConfig, out: Path) -> List[Path]:
    panel = read_panel_csv(config.panel, config.window_start)
    design = build_ts_design(panel, config.country, config.outcome, config.lags or None)
    if config.p is not None:
        order = ArimaOrder(p=config.p, q=config.q)
    else:
        order = select_order(design, config.pmax, config.qmax, config.jobs)
    fit = fit_arimax(design, order)

    record = {
        "fit": fit.to_record(),
        "diagnostics": residual_diagnostics(fit).to_record(),
        "lags": design.lags,
        "excluded_rows": design.excluded_rows,
        "floored_rows": design.floored_rows,
    }
    fitted = pd.DataFrame({
        "date": design.dates,
        "observed": design.log_level,
        "fitted": fitted_path(fit, design, "first").to_numpy(),
        "fitted_previous": fitted_path(fit, design, "previous").to_numpy(),
    })
    return [write_json(out / "fit.json", record), write_frame_csv(out / "fitted.csv", _dated(fitted))]


def panel_spec(config: PanelFitConfig) -> PanelSpec:
    """Regression specification described by a panel-fit configuration."""
    return PanelSpec(
        outcome=config.outcome,
        trend=config.trend,
        include_chinese_terms=config.chinese != "off",
        chinese_set="baseline" if config.chinese == "off" else config.chinese,
        lag_shift=config.lag_shift,
        window=(config.start, config.end) if config.start is not None else None,
        frequency="weekly" if config.weekly else "daily",
        interactions="vaccine_mobility" if config.interactions else "none",
        info_variables=config.info_variables,
    )


def _load_panel(config: PanelFitConfig):
    panel = read_panel_csv(config.panel, config.window_start)
    return weekly_aggregate(panel) if config.weekly else panel


def run_panel_fit(config: PanelFitConfig, out: Path) -> List[Path]:
    spec = panel_spec(config)
    fit = fit_fe_ols(build_panel_design(_load_panel(config), spec))
    outputs = [write_json(out / "fit.json", fit.to_record()), write_frame_csv(out / "coefficients.csv", coefficient_table(fit))]
    if spec.include_chinese_terms:
        outputs.append(write_frame_csv(out / "chinese_tests.csv", chinese_vaccine_tests(fit)))
    return outputs


def run_battery(config: BatteryConfig, out: Path) -> List[Path]:
    spec = panel_spec(config)
    variants = lag_shift_battery(spec) if config.battery == "lag_shift" else default_battery(spec)
    result = run_spec_battery(_load_panel(config), spec, variants, config.jobs)
    if result.errors:
        logger.warning("Battery variants failed", extra={"failed": sorted(result.errors), "variants": len(result.variants)})
    return [
        write_frame_csv(out / "battery.csv", result.table()),
        write_json(out / "battery.json", {"variants": result.variants, "errors": result.errors}),
    ]


def scenario_of(config: CounterfactualConfig) -> Scenario:
    """Dosing scenario described by a counterfactual configuration."""
    return Scenario(
        country=config.country,
        interval_weeks=config.interval_weeks,
        v1_cap=config.v1_cap,
        start=config.start,
        end=config.end,
        draws=config.draws,
        seed=config.seed,
        outcomes=tuple(config.outcomes),
        population=config.population,
        sample_parameters=config.sample_parameters,
    )


def run_counterfactual(config: CounterfactualConfig, out: Path) -> List[Path]:
    panel = read_panel_csv(config.panel, config.window_start)
    fits = {name: PanelFit.from_record(read_json(path)) for name, path in config.fit_files().items()}
    scenario = scenario_of(config)

    outputs: List[Path] = []
    summary: Dict[str, object] = {}
    for outcome in scenario.outcomes:
        if outcome == "cases":
            result = simulate_paths(fits["case_fit"], fits["mobility_fit"], panel, scenario, jobs=config.jobs)
        else:
            result = death_paths(fits["death_fit"], fits["mobility_death_fit"], panel, scenario, jobs=config.jobs)
        table = summarize(result, config.windows or None)
        summary[outcome] = {"result": result.to_record(), "summary": table.to_dict(orient="records")}

        outputs.append(write_frame_csv(out / f"{outcome}.csv", _dated(result.to_frame())))
        outputs.append(write_frame_csv(out / f"{outcome}_summary.csv", table))
        if config.chart:
            outputs.append(render_chart(result, out / f"{outcome}.svg"))

    # the schedule depends on the scenario only, not on the outcome
    outputs.append(write_frame_csv(out / "schedule.csv", _dated(result.schedule.to_frame())))
    outputs.append(write_json(out / "summary.json", summary))
    return outputs


COMMANDS: Dict[str, Tuple[Type[RunConfig], Runner]] = {
    "ingest": (IngestConfig, run_ingest),
    "synth": (SynthConfig, run_synth),
    "alloc": (AllocConfig, run_alloc),
    "ts-fit": (TsFitConfig, run_ts_fit),
    "panel-fit": (PanelFitConfig, run_panel_fit),
    "battery": (BatteryConfig, run_battery),
    "counterfactual": (CounterfactualConfig, run_counterfactual),
}
