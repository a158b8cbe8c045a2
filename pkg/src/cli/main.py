"""
Command-line entry point.

    python -m src.cli <subcommand> [options]

Every subcommand accepts ``--config <json>`` (keys mirror the flag names) and
``--jobs N``; explicit flags override the config file. Failures print
``[CODE] message`` on stderr and exit 1; usage errors exit 2.
"""

from pathlib import Path
from typing import Annotated, Any, Dict, List, Optional, Tuple

import typer

from ..environment import get_setting, load_environment_variables
from ..error import BaseError
from ..log import get_logger, is_logging_configured, setup_logging
from .commands import COMMANDS
from .config import ReproduceConfig, resolve_config
from .manifest import MANIFEST_NAME, execute, reproduce

logger = get_logger(__name__)

app = typer.Typer(
    name="vaxstrat",
    help="Vaccine dosing-strategy analysis: ingest, allocation, estimation and counterfactuals.",
    no_args_is_help=True,
    add_completion=False,
    pretty_exceptions_enable=False,
)

ConfigOption = Annotated[Optional[Path], typer.Option("--config", help="JSON file of settings; flags override it.")]
JobsOption = Annotated[Optional[int], typer.Option("--jobs", min=1, help="Worker count; results do not depend on it.")]
OutOption = Annotated[Optional[str], typer.Option("--out", help="Output directory.")]
PanelOption = Annotated[Optional[str], typer.Option("--panel", help="Canonical panel CSV written by 'ingest'.")]
WindowStartOption = Annotated[Optional[str], typer.Option("--window-start", help="First study day of the panel; earlier days are lag history.")]


def _fail(command: str, error: BaseError) -> None:
    logger.error("Run failed", extra={"command": command, "error": error.to_record()})
    typer.echo(str(error), err=True)
    raise typer.Exit(code=error.exit_status)


def _run(command: str, config: Optional[Path], flags: Dict[str, Any]) -> None:
    model, _ = COMMANDS[command]
    try:
        manifest = execute(command, resolve_config(model, config, flags))
    except BaseError as e:
        _fail(command, e)
    out = Path(manifest.config["out"])
    for name in manifest.outputs:
        typer.echo((out / name).as_posix())
    typer.echo((out / MANIFEST_NAME).as_posix())


def _pairs(values: Optional[List[str]], option: str) -> Dict[str, str]:
    pairs: Dict[str, str] = {}
    for value in values or []:
        key, sep, item = value.partition("=")
        if not sep or not key or not item:
            raise typer.BadParameter(f"expected KEY=VALUE, got '{value}'", param_hint=option)
        pairs[key.strip()] = item.strip()
    return pairs


def _date_range(value: Optional[str], option: str) -> Tuple[Optional[str], Optional[str]]:
    if value is None:
        return None, None
    start, sep, end = value.partition(":")
    if not sep or not start or not end:
        raise typer.BadParameter(f"expected START:END, got '{value}'", param_hint=option)
    return start, end


def _split(values: Optional[List[str]]) -> List[str]:
    return [item.strip() for value in values or [] for item in value.split(",") if item.strip()]


@app.callback()
def _configure() -> None:
    """Vaccine dosing-strategy analysis toolkit."""
    if Path(".env").is_file():
        load_environment_variables(".env", ".")
    if not is_logging_configured():
        setup_logging(get_setting("LOG_FORMAT"), "vaxstrat", get_setting("LOG_DIR"), get_setting("LOG_LEVEL"))


@app.command("ingest")
def ingest_command(
    inputs: Annotated[Optional[List[str]], typer.Argument(help="Raw CSV files.", show_default=False)] = None,
    schema: Annotated[Optional[str], typer.Option("--schema", help="'default' (public export headers) or 'identity'.")] = None,
    start: Annotated[Optional[str], typer.Option("--start", help="Study window start (YYYY-MM-DD).")] = None,
    end: Annotated[Optional[str], typer.Option("--end", help="Study window end (YYYY-MM-DD).")] = None,
    country: Annotated[Optional[List[str]], typer.Option("--country", help="Country to include; repeat for several.")] = None,
    history_days: Annotated[Optional[int], typer.Option("--history-days", help="Lead-in days kept before the window.")] = None,
    ignore_unknown_countries: Annotated[bool, typer.Option("--ignore-unknown-countries", help="Drop rows of countries outside the alias table instead of failing.")] = False,
    out: OutOption = None,
    config: ConfigOption = None,
    jobs: JobsOption = None,
) -> None:
    """Assemble raw CSV files into the canonical daily panel."""
    _run("ingest", config, {
        "inputs": inputs, "schema": schema, "start": start, "end": end, "countries": country,
        "history_days": history_days, "out": out, "jobs": jobs,
        "unknown_countries": "ignore" if ignore_unknown_countries else None,
    })


@app.command("synth")
def synth_command(
    country: Annotated[Optional[List[str]], typer.Option("--country", help="Country to simulate; repeat for several.")] = None,
    start: Annotated[Optional[str], typer.Option("--start")] = None,
    end: Annotated[Optional[str], typer.Option("--end")] = None,
    history_days: Annotated[Optional[int], typer.Option("--history-days")] = None,
    seed: Annotated[Optional[int], typer.Option("--seed")] = None,
    out: OutOption = None,
    config: ConfigOption = None,
    jobs: JobsOption = None,
) -> None:
    """Write the synthetic raw fixture (logical column names)."""
    _run("synth", config, {
        "countries": country, "start": start, "end": end, "history_days": history_days,
        "seed": seed, "out": out, "jobs": jobs,
    })


@app.command("alloc")
def alloc_command(
    ve1: Annotated[Optional[float], typer.Option("--ve1", help="First-dose efficacy.")] = None,
    ve2: Annotated[Optional[float], typer.Option("--ve2", help="Two-dose efficacy.")] = None,
    stock: Annotated[Optional[float], typer.Option("--stock", help="Doses per hundred available.")] = None,
    capacity: Annotated[Optional[float], typer.Option("--capacity", help="Doses per hundred per day.")] = None,
    interval: Annotated[Optional[int], typer.Option("--interval", help="Days between doses.")] = None,
    horizon: Annotated[Optional[int], typer.Option("--horizon", help="Simulated days.")] = None,
    split_rule: Annotated[Optional[str], typer.Option("--split-rule", help="'equal' or 'due_priority'.")] = None,
    out: OutOption = None,
    config: ConfigOption = None,
    jobs: JobsOption = None,
) -> None:
    """Simulate a rollout and its population protection."""
    _run("alloc", config, {
        "ve1": ve1, "ve2": ve2, "stock": stock, "capacity": capacity, "interval": interval,
        "horizon": horizon, "split_rule": split_rule, "out": out, "jobs": jobs,
    })


@app.command("ts-fit")
def ts_fit_command(
    panel: PanelOption = None,
    country: Annotated[Optional[str], typer.Option("--country")] = None,
    outcome: Annotated[Optional[str], typer.Option("--outcome", help="'cases' or 'deaths'.")] = None,
    pmax: Annotated[Optional[int], typer.Option("--pmax", help="Largest AR order searched.")] = None,
    qmax: Annotated[Optional[int], typer.Option("--qmax", help="Largest MA order searched.")] = None,
    p: Annotated[Optional[int], typer.Option("--p", help="Fixed AR order (with --q).")] = None,
    q: Annotated[Optional[int], typer.Option("--q", help="Fixed MA order (with --p).")] = None,
    lag: Annotated[Optional[List[str]], typer.Option("--lags", help="TERM=DAYS lag override; repeat for several.")] = None,
    window_start: WindowStartOption = None,
    out: OutOption = None,
    config: ConfigOption = None,
    jobs: JobsOption = None,
) -> None:
    """Fit the single-country ARIMA-X model."""
    _run("ts-fit", config, {
        "panel": panel, "country": country, "outcome": outcome, "pmax": pmax, "qmax": qmax, "p": p, "q": q,
        "lags": _pairs(lag, "--lags"), "window_start": window_start, "out": out, "jobs": jobs,
    })


def _panel_flags(
    panel: Optional[str],
    outcome: Optional[str],
    trend: Optional[str],
    chinese: Optional[str],
    lag_shift: Optional[int],
    window: Optional[str],
    weekly: Optional[bool],
    interactions: Optional[bool],
    info_variables: Optional[str],
    window_start: Optional[str],
    out: Optional[str],
    jobs: Optional[int],
) -> Dict[str, Any]:
    start, end = _date_range(window, "--window")
    return {
        "panel": panel, "outcome": outcome, "trend": trend, "chinese": chinese, "lag_shift": lag_shift,
        "start": start, "end": end, "weekly": weekly, "interactions": interactions,
        "info_variables": info_variables, "window_start": window_start, "out": out, "jobs": jobs,
    }


OutcomeOption = Annotated[Optional[str], typer.Option("--outcome", help="'cases', 'deaths' or 'mobility'.")]
TrendOption = Annotated[Optional[str], typer.Option("--trend", help="'none', 'linear', 'quadratic' or 'cubic'.")]
ChineseOption = Annotated[Optional[str], typer.Option("--chinese", help="'baseline', 'extended' or 'off'.")]
LagShiftOption = Annotated[Optional[int], typer.Option("--lag-shift", help="Days added to both vaccine lags.")]
WindowOption = Annotated[Optional[str], typer.Option("--window", help="Estimation window START:END.")]
WeeklyOption = Annotated[Optional[bool], typer.Option("--weekly/--daily", help="Estimate on 7-day blocks.")]
InteractionsOption = Annotated[Optional[bool], typer.Option("--interactions/--no-interactions", help="Add vaccine x mobility terms.")]
InfoOption = Annotated[Optional[str], typer.Option("--info-variables", help="Mobility equation information: 'cases' or 'deaths'.")]


@app.command("panel-fit")
def panel_fit_command(
    panel: PanelOption = None,
    outcome: OutcomeOption = None,
    trend: TrendOption = None,
    chinese: ChineseOption = None,
    lag_shift: LagShiftOption = None,
    window: WindowOption = None,
    weekly: WeeklyOption = None,
    interactions: InteractionsOption = None,
    info_variables: InfoOption = None,
    window_start: WindowStartOption = None,
    out: OutOption = None,
    config: ConfigOption = None,
    jobs: JobsOption = None,
) -> None:
    """Fit one country fixed-effects panel regression."""
    _run("panel-fit", config, _panel_flags(panel, outcome, trend, chinese, lag_shift, window, weekly, interactions, info_variables, window_start, out, jobs))


@app.command("battery")
def battery_command(
    panel: PanelOption = None,
    battery: Annotated[Optional[str], typer.Option("--battery", help="'default' or 'lag_shift'.")] = None,
    outcome: OutcomeOption = None,
    trend: TrendOption = None,
    chinese: ChineseOption = None,
    lag_shift: LagShiftOption = None,
    window: WindowOption = None,
    weekly: WeeklyOption = None,
    interactions: InteractionsOption = None,
    info_variables: InfoOption = None,
    window_start: WindowStartOption = None,
    out: OutOption = None,
    config: ConfigOption = None,
    jobs: JobsOption = None,
) -> None:
    """Fit a battery of panel specification variants."""
    flags = _panel_flags(panel, outcome, trend, chinese, lag_shift, window, weekly, interactions, info_variables, window_start, out, jobs)
    _run("battery", config, {**flags, "battery": battery})


@app.command("counterfactual")
def counterfactual_command(
    panel: PanelOption = None,
    case_fit: Annotated[Optional[str], typer.Option("--case-fit", help="Case equation fit.json.")] = None,
    death_fit: Annotated[Optional[str], typer.Option("--death-fit", help="Death equation fit.json.")] = None,
    mobility_fit: Annotated[Optional[str], typer.Option("--mobility-fit", help="Mobility fit with case information.")] = None,
    mobility_death_fit: Annotated[Optional[str], typer.Option("--mobility-death-fit", help="Mobility fit with death information.")] = None,
    country: Annotated[Optional[str], typer.Option("--country")] = None,
    interval_weeks: Annotated[Optional[int], typer.Option("--interval-weeks")] = None,
    v1_cap: Annotated[Optional[float], typer.Option("--v1-cap", help="First-dose cap per hundred.")] = None,
    start: Annotated[Optional[str], typer.Option("--start", help="First reallocated day.")] = None,
    end: Annotated[Optional[str], typer.Option("--end", help="Last simulated day.")] = None,
    draws: Annotated[Optional[int], typer.Option("--draws")] = None,
    seed: Annotated[Optional[int], typer.Option("--seed")] = None,
    outcomes: Annotated[Optional[List[str]], typer.Option("--outcomes", help="'cases', 'deaths' or both (comma separated).")] = None,
    population: Annotated[Optional[float], typer.Option("--population", help="Population in millions.")] = None,
    sample_parameters: Annotated[Optional[bool], typer.Option("--sample-parameters/--point-estimates")] = None,
    chart: Annotated[Optional[bool], typer.Option("--chart/--no-chart", help="Also write SVG charts.")] = None,
    window_start: WindowStartOption = None,
    out: OutOption = None,
    config: ConfigOption = None,
    jobs: JobsOption = None,
) -> None:
    """Simulate counterfactual case and death paths under a dosing scenario."""
    _run("counterfactual", config, {
        "panel": panel, "case_fit": case_fit, "death_fit": death_fit, "mobility_fit": mobility_fit,
        "mobility_death_fit": mobility_death_fit, "country": country, "interval_weeks": interval_weeks,
        "v1_cap": v1_cap, "start": start, "end": end, "draws": draws, "seed": seed, "outcomes": _split(outcomes),
        "population": population, "sample_parameters": sample_parameters, "chart": chart,
        "window_start": window_start, "out": out, "jobs": jobs,
    })


@app.command("reproduce")
def reproduce_command(
    manifest: Annotated[Optional[str], typer.Option("--manifest", help="manifest.json of the run to replay.")] = None,
    config: ConfigOption = None,
    jobs: JobsOption = None,
) -> None:
    """Replay a recorded run and verify its output digests."""
    try:
        settings = resolve_config(ReproduceConfig, config, {"manifest": manifest, "jobs": jobs})
        replay = reproduce(settings.manifest, settings.jobs)
    except BaseError as e:
        _fail("reproduce", e)
    typer.echo(f"PASS {replay.command}: {len(replay.outputs)} outputs match {settings.manifest}")


def main() -> None:
    app(prog_name="vaxstrat")
