"""CSV tables, JSON summary and SVG error curves of an experiment"""

import csv
import json
import logging
import math
from collections.abc import Iterable
from pathlib import Path
from typing import TYPE_CHECKING

import matplotlib
from matplotlib.figure import Figure

from ..common import DemoPool, IrlError, IrlException, Metric
from ..helper import format_float
from ..learner.record import RunRecord
from ..teacher.curriculum import Curriculum
from ..teacher.environment import Environment

if TYPE_CHECKING:
    from .runner import AggregateRow, ExperimentResult

__all__ = []

logger = logging.getLogger(__name__)

RUN_COLUMNS = ("step", "feature_mismatch", "reward_gap", "selected_count", "lambda", "seed")
AGGREGATE_COLUMNS = (
    "step",
    "strategy",
    "mean_mismatch",
    "std_mismatch",
    "mean_gap",
    "std_gap",
    "n",
)
CURRICULUM_COLUMNS = ("rank", "demo_index", "score", "start_state", "label")
PLOT_LABELS = {
    Metric.FEATURE_MISMATCH: ("mean_mismatch", "feature expectation mismatch"),
    Metric.REWARD_GAP: ("mean_gap", "reward gap"),
}
SVG_SETTINGS = {"svg.hashsalt": "pycirl", "svg.fonttype": "none"}


def safe_name(strategy: str) -> str:
    """Strategy name usable as a directory name (``spirl:0.1`` -> ``spirl_0.1``)"""
    return strategy.replace(":", "_").replace("/", "_")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return "" if math.isnan(value) else format_float(value)
    return str(value)


def _open_writer(path: Path, columns: Iterable[str]):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        handle = path.open("w", newline="", encoding="utf-8")
    except OSError as exc:
        raise IrlException(f"unable to write '{path}': {exc}", IrlError.IO_FAILURE) from exc
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(columns)
    return handle, writer


def write_run_csv(path: "str | Path", record: RunRecord) -> Path:
    """One row per training step, SPIRL columns are empty for the other strategies"""
    path = Path(path)
    handle, writer = _open_writer(path, RUN_COLUMNS)
    with handle:
        for step in record.steps:
            writer.writerow(
                [
                    step.step,
                    _cell(step.feature_mismatch),
                    _cell(step.reward_gap),
                    _cell(step.selected_count),
                    _cell(step.lambda_),
                    _cell(record.seed),
                ]
            )
    return path


def write_aggregate_csv(path: "str | Path", rows: "Iterable[AggregateRow]") -> Path:
    path = Path(path)
    handle, writer = _open_writer(path, AGGREGATE_COLUMNS)
    with handle:
        for row in rows:
            writer.writerow(
                [
                    row.step,
                    row.strategy,
                    _cell(row.mean_mismatch),
                    _cell(row.std_mismatch),
                    _cell(row.mean_gap),
                    _cell(row.std_gap),
                    row.n,
                ]
            )
    return path


def write_curriculum_csv(
    path: "str | Path", curriculum: Curriculum, env: Environment, pool: DemoPool
) -> Path:
    """Demonstrations in curriculum order with their score and start state

    Drawing the start states by rank on the map shows where the teacher begins.
    """
    path = Path(path)
    handle, writer = _open_writer(path, CURRICULUM_COLUMNS)
    with handle:
        for rank, index in enumerate(curriculum.order):
            start = pool[index].start_state
            writer.writerow(
                [rank, index, _cell(float(curriculum.scores[index])), start, env.label(start)]
            )
    return path


def _json_value(value: float) -> "float | None":
    return None if math.isnan(value) else value


def summarize(result: "ExperimentResult") -> dict:
    """Final-step statistics of every strategy"""
    last_rows = {}
    for row in result.aggregate:
        last_rows[row.strategy] = row
    strategies = {}
    for name, runs in result.records.items():
        row = last_rows.get(name)
        strategies[name] = {
            "n_runs": len(runs),
            "n_steps": len(runs[0]) if runs else 0,
            "final_mean_mismatch": _json_value(row.mean_mismatch) if row else None,
            "final_std_mismatch": _json_value(row.std_mismatch) if row else None,
            "final_mean_gap": _json_value(row.mean_gap) if row else None,
            "final_std_gap": _json_value(row.std_gap) if row else None,
            "non_converged_steps": sum(run.n_non_converged for run in runs),
            "final_weights_digests": [run.final_weights_digest for run in runs],
        }
    return {
        "environment": result.setup.env.name,
        "n_demos": len(result.setup.pool),
        "n_repeats": result.config.learner.n_repeats,
        "seed": result.config.learner.seed,
        "mu_mode": result.config.learner.mu_mode.value,
        "strategies": strategies,
    }


def write_summary(path: "str | Path", result: "ExperimentResult") -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(summarize(result), indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IrlException(f"unable to write '{path}': {exc}", IrlError.IO_FAILURE) from exc
    return path


def plot_error_curves(
    path: "str | Path", rows: "Iterable[AggregateRow]", metric: Metric, title: str = ""
) -> "Path | None":
    """SVG line plot of the mean error against the step, one line per strategy

    Returns ``None`` when no strategy recorded ``metric``.
    """
    column, label = PLOT_LABELS[metric]
    curves: dict[str, tuple[list[int], list[float]]] = {}
    for row in rows:
        steps, values = curves.setdefault(row.strategy, ([], []))
        steps.append(row.step)
        values.append(getattr(row, column))
    curves = {
        name: curve for name, curve in curves.items() if not all(map(math.isnan, curve[1]))
    }
    if not curves:
        return None

    figure = Figure(figsize=(7, 4.5))
    axes = figure.add_subplot()
    for name, (steps, values) in curves.items():
        axes.plot(steps, values, label=name)
    axes.set_xlabel("step")
    axes.set_ylabel(label)
    if title:
        axes.set_title(title)
    axes.legend()
    figure.tight_layout()

    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with matplotlib.rc_context(SVG_SETTINGS):
            figure.savefig(path, format="svg", metadata={"Date": None})
    except OSError as exc:
        raise IrlException(f"unable to write '{path}': {exc}", IrlError.IO_FAILURE) from exc
    return path


def write_report(result: "ExperimentResult") -> list[Path]:
    """Write every output file of an experiment to ``config.output.directory``

    Layout: ``runs/<strategy>/run_<seed>.csv``, ``aggregate.csv``, ``summary.json`` and one
    ``<metric>.svg`` per recorded metric.
    """
    output = result.config.output
    directory = Path(output.directory)
    written = []
    for name, runs in result.records.items():
        for run in runs:
            path = directory / "runs" / safe_name(name) / f"run_{run.seed}.csv"
            written.append(write_run_csv(path, run))
    written.append(write_aggregate_csv(directory / "aggregate.csv", result.aggregate))
    written.append(write_summary(directory / "summary.json", result))
    if output.plot:
        for metric in output.metrics:
            path = plot_error_curves(
                directory / f"{metric.value}.svg",
                result.aggregate,
                metric,
                result.setup.env.name,
            )
            if path is not None:
                written.append(path)
    logger.info("%d files written to %s", len(written), directory)
    return written
