"""
CLI module.
Exports the typer application, run configurations and the manifest/replay helpers.
"""

from .config import (
    RunConfig,
    IngestConfig,
    SynthConfig,
    AllocConfig,
    TsFitConfig,
    PanelFitConfig,
    BatteryConfig,
    CounterfactualConfig,
    ReproduceConfig,
    resolve_config,
    load_config_file,
)
from .commands import COMMANDS
from .manifest import MANIFEST_NAME, RunManifest, execute, load_manifest, reproduce
from .main import app, main

__all__ = [
    "RunConfig",
    "IngestConfig",
    "SynthConfig",
    "AllocConfig",
    "TsFitConfig",
    "PanelFitConfig",
    "BatteryConfig",
    "CounterfactualConfig",
    "ReproduceConfig",
    "resolve_config",
    "load_config_file",
    "COMMANDS",
    "MANIFEST_NAME",
    "RunManifest",
    "execute",
    "load_manifest",
    "reproduce",
    "app",
    "main",
]
