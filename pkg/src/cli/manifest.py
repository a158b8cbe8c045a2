"""
Run manifests and replay.

Every run writes ``manifest.json`` next to its outputs. ``reproduce`` checks
the recorded inputs, replays the run into a scratch directory and compares
output digests; timestamps are not part of any digest.
"""

import tempfile
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List

from pydantic import Field

from .. import __version__
from ..environment import SettingsModel
from ..error import ReproducibilityError, ValidationError
from ..file import digest_files, ensure_directory, file_digest, read_json, write_json
from ..log import get_logger
from .commands import COMMANDS
from .config import RunConfig

logger = get_logger(__name__)

MANIFEST_NAME = "manifest.json"
TOOL_NAME = "vaxstrat"


class RunManifest(SettingsModel):
    """
    Provenance of one run.

    Attributes:
        tool: Tool name.
        version: Tool version.
        command: Subcommand that produced the outputs.
        config: Fully resolved configuration.
        seed: Seed of the run, if the subcommand draws random numbers.
        inputs: Input path -> sha256 digest.
        outputs: Output file name (relative to the output directory) -> sha256 digest.
        started: UTC start time.
        finished: UTC finish time.
    """

    tool: str = TOOL_NAME
    version: str = __version__
    command: str
    config: Dict[str, Any]
    seed: int | None = None
    inputs: Dict[str, str] = Field(default_factory=dict)
    outputs: Dict[str, str] = Field(default_factory=dict)
    started: str
    finished: str


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _command(name: str):
    if name not in COMMANDS:
        raise ValidationError(f"Unknown command '{name}'. Must be one of {sorted(COMMANDS)}")
    return COMMANDS[name]


def _output_digests(out: Path, paths: List[Path]) -> Dict[str, str]:
    return {path.relative_to(out).as_posix(): file_digest(path) for path in sorted(set(paths))}


def execute(command: str, config: RunConfig, write_manifest: bool = True) -> RunManifest:
    """
    Run a subcommand and record its manifest.

    Args:
        command: Subcommand name.
        config: Validated configuration of that subcommand.
        write_manifest: Write ``manifest.json`` into the output directory.

    Returns:
        RunManifest: Provenance of the run.
    """
    _, runner = _command(command)
    started = _now()
    inputs = digest_files(config.input_files())
    out = ensure_directory(config.out)

    logger.info("Run started", extra={"command": command, "out": out.as_posix(), "inputs": len(inputs)})
    outputs = _output_digests(out, [Path(path) for path in runner(config, out)])

    manifest = RunManifest(
        command=command,
        config=config.to_record(),
        seed=getattr(config, "seed", None),
        inputs=inputs,
        outputs=outputs,
        started=started,
        finished=_now(),
    )
    if write_manifest:
        write_json(out / MANIFEST_NAME, manifest.to_record())
    logger.info("Run finished", extra={"command": command, "outputs": sorted(outputs)})
    return manifest


def load_manifest(path: str | Path) -> RunManifest:
    """
    Read a run manifest.

    Raises:
        ValidationError: If the file is not a valid manifest.
    """
    return RunManifest.model_validate(read_json(path))


def _check_inputs(manifest: RunManifest) -> None:
    for path, digest in manifest.inputs.items():
        if not Path(path).is_file():
            raise ReproducibilityError(path, f"Input file '{path}' is missing")
        if file_digest(path) != digest:
            raise ReproducibilityError(path, f"Input file '{path}' does not match its recorded digest")


def _compare_outputs(expected: Dict[str, str], actual: Dict[str, str]) -> None:
    for name in sorted(set(expected) | set(actual)):
        if name not in actual:
            raise ReproducibilityError(name, f"Output '{name}' was not produced by the replay")
        if name not in expected:
            raise ReproducibilityError(name, f"Replay produced unrecorded output '{name}'")
        if expected[name] != actual[name]:
            raise ReproducibilityError(name, f"Output '{name}' differs from its recorded digest")


def reproduce(manifest_path: str | Path, jobs: int | None = None) -> RunManifest:
    """
    Replay a recorded run and verify its outputs.

    The manifest's ``seed`` overrides the seed inside its configuration.

    Args:
        manifest_path: Manifest written by a previous run.
        jobs: Worker count for the replay; defaults to the recorded one.

    Returns:
        RunManifest: Manifest of the replay.

    Raises:
        ReproducibilityError: If an input is missing or changed, or an output
            digest differs; the error names the file.
    """
    manifest = load_manifest(manifest_path)
    model, _ = _command(manifest.command)
    _check_inputs(manifest)

    with tempfile.TemporaryDirectory(prefix="vaxstrat-replay-") as scratch:
        values = {**manifest.config, "out": scratch}
        if manifest.seed is not None and "seed" in model.model_fields:
            values["seed"] = manifest.seed
        if jobs is not None:
            values["jobs"] = jobs
        replay = execute(manifest.command, model.model_validate(values), write_manifest=False)

    _compare_outputs(manifest.outputs, replay.outputs)
    logger.info("Run reproduced", extra={"manifest": Path(manifest_path).as_posix(), "command": manifest.command, "outputs": len(replay.outputs)})
    return replay
