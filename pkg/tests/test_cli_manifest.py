import json

import pytest
import numpy as np
import pandas as pd

from src.cli.config import AllocConfig, CounterfactualConfig, PanelFitConfig
from src.cli.manifest import MANIFEST_NAME, execute, load_manifest, reproduce
from src.error import ReproducibilityError, ValidationError
from src.file import read_json
from src.ingest import write_panel_csv
from src.panel import PanelFit


def _alloc(out, **kwargs):
    return AllocConfig(**{"ve1": 0.5, "ve2": 0.95, "stock": 100.0, "capacity": 100.0 / 120.0, "interval": 21, "horizon": 120, "out": str(out), **kwargs})


@pytest.mark.unit
@pytest.mark.fast
class TestExecute:
    """Test cases for execute function."""

    def test_manifest_written(self, tmp_path):
        """Test that the manifest records config, outputs and timestamps."""
        manifest = execute("alloc", _alloc(tmp_path))

        loaded = load_manifest(tmp_path / MANIFEST_NAME)
        assert loaded == manifest
        assert manifest.tool == "vaxstrat"
        assert manifest.inputs == {}
        assert set(manifest.outputs) == {"alloc.csv", "protection_table.csv"}
        assert manifest.started <= manifest.finished

    def test_outputs_independent_of_run(self, tmp_path):
        """Test that two runs give identical output digests."""
        first = execute("alloc", _alloc(tmp_path / "a"))
        second = execute("alloc", _alloc(tmp_path / "b", jobs=4))

        assert first.outputs == second.outputs

    def test_unknown_command(self, tmp_path):
        """Test that an unknown command raises ValidationError."""
        with pytest.raises(ValidationError):
            execute("plot", _alloc(tmp_path))


@pytest.mark.unit
class TestReproduce:
    """Test cases for reproduce function."""

    def test_pass(self, tmp_path):
        """Test that an unchanged run reproduces."""
        manifest = execute("alloc", _alloc(tmp_path))

        assert reproduce(tmp_path / MANIFEST_NAME).outputs == manifest.outputs

    def test_missing_input(self, tmp_path, synthetic_panel):
        """Test that a deleted input raises ReproducibilityError naming it."""
        panel_path = write_panel_csv(synthetic_panel, tmp_path / "panel.csv")
        execute("panel-fit", PanelFitConfig(panel=panel_path.as_posix(), outcome="mobility", window_start="2020-09-01", out=str(tmp_path / "fit")))
        panel_path.unlink()

        with pytest.raises(ReproducibilityError) as exc_info:
            reproduce(tmp_path / "fit" / MANIFEST_NAME)
        assert exc_info.value.path == panel_path.as_posix()

    def test_recorded_output_changed(self, tmp_path):
        """Test that a tampered output digest fails naming the output."""
        execute("alloc", _alloc(tmp_path))
        record = read_json(tmp_path / MANIFEST_NAME)
        record["outputs"]["alloc.csv"] = "0" * 64
        (tmp_path / MANIFEST_NAME).write_text(json.dumps(record), encoding="utf-8")

        with pytest.raises(ReproducibilityError, match="alloc.csv"):
            reproduce(tmp_path / MANIFEST_NAME)


@pytest.mark.integration
class TestPipeline:
    """Test cases for the panel-fit to counterfactual pipeline."""

    def test_fit_then_simulate(self, tmp_path, synthetic_panel):
        """Test that counterfactual runs consume panel-fit records and replay identically."""
        panel_path = write_panel_csv(synthetic_panel, tmp_path / "panel.csv").as_posix()
        base = {"panel": panel_path, "window_start": "2020-09-01"}
        execute("panel-fit", PanelFitConfig(**base, outcome="cases", out=str(tmp_path / "cases")))
        execute("panel-fit", PanelFitConfig(**base, outcome="mobility", out=str(tmp_path / "mobility")))

        fit = PanelFit.from_record(read_json(tmp_path / "cases" / "fit.json"))
        coefficients = pd.read_csv(tmp_path / "cases" / "coefficients.csv")
        np.testing.assert_array_equal(coefficients["estimate"].to_numpy(), fit.params)

        config = CounterfactualConfig(
            **base, country="USA", interval_weeks=12, v1_cap=65.0, start="2021-02-01", draws=5, seed=9,
            outcomes=["cases"], case_fit=str(tmp_path / "cases" / "fit.json"), mobility_fit=str(tmp_path / "mobility" / "fit.json"),
            chart=True, windows={"spring": ("2021-03-01", "2021-05-31")}, out=str(tmp_path / "cf"),
        )
        manifest = execute("counterfactual", config)

        assert set(manifest.outputs) == {"cases.csv", "cases_summary.csv", "cases.svg", "schedule.csv", "summary.json"}
        assert manifest.seed == 9
        assert len(manifest.inputs) == 3
        summary = pd.read_csv(tmp_path / "cf" / "cases_summary.csv")
        assert list(summary["window"]) == ["spring", "full"]
        assert reproduce(tmp_path / "cf" / MANIFEST_NAME, jobs=2).outputs == manifest.outputs
