"""
SVG chart of a counterfactual result.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from ..file import ensure_directory  # noqa: E402
from ..log import get_logger  # noqa: E402
from .simulate import CounterfactualResult  # noqa: E402

logger = get_logger(__name__)

_STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    # stable element ids across runs
    "svg.hashsalt": "vaxstrat",
    "svg.fonttype": "none",
}


def render_chart(result: CounterfactualResult, path: str | Path) -> Path:
    """
    Write a two-panel SVG: log-scale change with its 90% band, and daily levels.

    Args:
        result: Counterfactual result.
        path: Destination ``.svg`` file.

    Returns:
        Path: The written file.
    """
    path = Path(path)
    ensure_directory(path.parent)
    label = "cases" if result.outcome == "cases" else "deaths"
    unit = "people" if result.units == "people" else "per million"

    with plt.rc_context(_STYLE):
        fig, (top, bottom) = plt.subplots(2, 1, figsize=(7.0, 6.0), sharex=True)

        top.axhline(0.0, color="black", linewidth=0.6)
        top.fill_between(result.dates, result.p5 - result.observed, result.p95 - result.observed, color="tab:blue", alpha=0.25, linewidth=0, label="90% band")
        top.plot(result.dates, result.delta, color="tab:blue", label="mean")
        top.set_ylabel(f"log weekly {label}, change")
        top.legend(loc="upper left", frameon=False)
        top.set_title(f"{result.country}: {result.scenario.interval_weeks}-week interval, first-dose cap {result.scenario.v1_cap:g}")

        bottom.plot(result.dates, result.observed_level, color="black", linewidth=0.9, label="observed")
        bottom.fill_between(result.dates, result.level_p5, result.level_p95, color="tab:red", alpha=0.25, linewidth=0, label="90% band")
        bottom.plot(result.dates, result.level_mean, color="tab:red", linestyle="--", label="counterfactual")
        bottom.set_ylabel(f"daily {label} ({unit})")
        bottom.legend(loc="upper left", frameon=False)

        fig.autofmt_xdate()
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)

    logger.info("Chart written", extra={"file": path.as_posix(), "country": result.country, "outcome": result.outcome})
    return path
