"""
Run configurations of the CLI subcommands.

Values are resolved in the order built-in defaults < environment
(``VAXSTRAT_JOBS``, ``VAXSTRAT_SEED``) < ``--config`` JSON file < explicit
flags, then validated by the subcommand's model.
"""

from datetime import date
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Tuple, Type, TypeVar

from pydantic import Field, model_validator

from ..environment import SettingsModel, get_setting
from ..error import ConfigurationError, ValidationError
from ..file import read_json
from ..ingest import STUDY_WINDOW
from ..counterfactual import DEFAULT_DRAWS
from ..counterfactual.scenario import DEFAULT_SEED

_ENVIRONMENT_FIELDS = {"jobs": "JOBS", "seed": "SEED"}


class RunConfig(SettingsModel):
    """
    Settings shared by every subcommand.

    Attributes:
        out: Output directory; ``manifest.json`` is written there.
        jobs: Worker count. Outputs do not depend on it.
    """

    out: str = "out"
    jobs: int = Field(default=1, ge=1)

    def input_files(self) -> List[str]:
        """Files the run reads, as given in the configuration."""
        return []


class PanelInputConfig(RunConfig):
    """Runs reading a canonical panel CSV."""

    panel: str
    window_start: date | None = None

    def input_files(self) -> List[str]:
        return [self.panel]


class IngestConfig(RunConfig):
    inputs: List[str] = Field(min_length=1)
    schema_name: Literal["default", "identity"] = Field(default="default", alias="schema")
    start: date = STUDY_WINDOW[0]
    end: date = STUDY_WINDOW[1]
    countries: List[str] | None = None
    history_days: int = Field(default=0, ge=0)
    unknown_countries: Literal["error", "ignore"] = "error"

    def input_files(self) -> List[str]:
        return list(self.inputs)

    def to_record(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True)


class SynthConfig(RunConfig):
    countries: List[str] | None = None
    start: date = STUDY_WINDOW[0]
    end: date = STUDY_WINDOW[1]
    history_days: int = Field(default=60, ge=0)
    seed: int = Field(default=DEFAULT_SEED, ge=0)


class AllocConfig(RunConfig):
    ve1: float
    ve2: float
    stock: float
    capacity: float
    interval: int
    horizon: int
    split_rule: Literal["equal", "due_priority"] = "equal"


class TsFitConfig(PanelInputConfig):
    """
    ARIMA-X fit of one country.

    ``p`` and ``q`` fix the order; otherwise it is selected by AICc over
    [0, pmax] x [0, qmax].
    """

    country: str
    outcome: Literal["cases", "deaths"] = "cases"
    pmax: int = Field(default=5, ge=0)
    qmax: int = Field(default=5, ge=0)
    p: int | None = Field(default=None, ge=0)
    q: int | None = Field(default=None, ge=0)
    lags: Dict[str, int] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _order_pair(self) -> "TsFitConfig":
        if (self.p is None) != (self.q is None):
            raise ValidationError("Give both p and q to fix the ARIMA order")
        return self


class PanelFitConfig(PanelInputConfig):
    outcome: Literal["cases", "deaths", "mobility"] = "cases"
    trend: Literal["none", "linear", "quadratic", "cubic"] | None = None
    chinese: Literal["baseline", "extended", "off"] = "off"
    lag_shift: int = 0
    start: date | None = None
    end: date | None = None
    weekly: bool = False
    interactions: bool = False
    info_variables: Literal["cases", "deaths"] | None = None

    @model_validator(mode="after")
    def _window_pair(self) -> "PanelFitConfig":
        if (self.start is None) != (self.end is None):
            raise ValidationError("Give both start and end to restrict the estimation window")
        return self


class BatteryConfig(PanelFitConfig):
    battery: Literal["default", "lag_shift"] = "default"


class CounterfactualConfig(PanelInputConfig):
    """
    Counterfactual simulation of one country.

    Case paths need ``case_fit`` and ``mobility_fit``; death paths need
    ``death_fit`` and ``mobility_death_fit`` (mobility fitted with death
    information variables).
    """

    country: str
    interval_weeks: int
    v1_cap: float
    start: date
    end: date | None = None
    draws: int = Field(default=DEFAULT_DRAWS, ge=1)
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    outcomes: List[Literal["cases", "deaths"]] = Field(default_factory=lambda: ["cases", "deaths"])
    case_fit: str | None = None
    death_fit: str | None = None
    mobility_fit: str | None = None
    mobility_death_fit: str | None = None
    population: float | None = Field(default=None, gt=0)
    sample_parameters: bool = True
    chart: bool = False
    windows: Dict[str, Tuple[date, date]] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _fits_present(self) -> "CounterfactualConfig":
        needed = {"cases": ("case_fit", "mobility_fit"), "deaths": ("death_fit", "mobility_death_fit")}
        for outcome in self.outcomes:
            missing = [name for name in needed[outcome] if getattr(self, name) is None]
            if missing:
                raise ValidationError(f"Outcome '{outcome}' needs {', '.join(missing)}")
        return self

    def fit_files(self) -> Dict[str, str]:
        names = ("case_fit", "death_fit", "mobility_fit", "mobility_death_fit")
        return {name: getattr(self, name) for name in names if getattr(self, name) is not None}

    def input_files(self) -> List[str]:
        return [self.panel, *self.fit_files().values()]


C = TypeVar("C", bound=SettingsModel)


def _normalise_keys(values: Mapping[str, Any]) -> Dict[str, Any]:
    return {str(key).replace("-", "_"): value for key, value in values.items()}


def _is_set(value: Any) -> bool:
    return value is not None and not (isinstance(value, (list, tuple, dict)) and not value)


def _environment_values(model: Type[SettingsModel]) -> Dict[str, Any]:
    return {name: get_setting(setting) for name, setting in _ENVIRONMENT_FIELDS.items() if name in model.model_fields and get_setting(setting) is not None}


def load_config_file(path: str | Path) -> Dict[str, Any]:
    """
    Read a ``--config`` JSON object.

    Raises:
        ConfigurationError: If the file does not hold a JSON object.
    """
    values = read_json(path)
    if not isinstance(values, dict):
        raise ConfigurationError(f"Config file '{Path(path).as_posix()}' must hold a JSON object")
    return _normalise_keys(values)


def resolve_config(model: Type[C], config_path: str | Path | None = None, flags: Mapping[str, Any] | None = None) -> C:
    """
    Merge configuration layers and validate them.

    Args:
        model: Configuration model of the subcommand.
        config_path: Optional JSON file whose keys mirror the flag names.
        flags: Explicit flag values; unset flags (None or empty) are skipped.

    Returns:
        The validated configuration.

    Raises:
        ConfigurationError: If the config file is not a JSON object.
        ValidationError: If the merged values are invalid or unknown.
    """
    values: Dict[str, Any] = _environment_values(model)
    if config_path is not None:
        values.update(load_config_file(config_path))
    values.update({name: value for name, value in _normalise_keys(flags or {}).items() if _is_set(value)})
    return model.model_validate(values)


class ReproduceConfig(SettingsModel):
    """
    Replay of a recorded run.

    Attributes:
        manifest: Manifest written by the run.
        jobs: Worker count of the replay.
    """

    manifest: str
    jobs: int | None = Field(default=None, ge=1)
