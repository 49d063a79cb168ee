"""Harness API

This module contains the experiment configuration, the metrics, the repeated runner, the
report writers and the command line interface.
"""

from .cli import cli_main, main
from .config import (
    EnvironmentConfig,
    ExperimentConfig,
    ExpertConfig,
    LearnerConfig,
    OutputConfig,
    StrategyConfig,
    StrategyFamily,
    StrategySpec,
)
from .metrics import metric_callbacks, metric_feature_mismatch, metric_reward_gap
from .report import plot_error_curves, write_aggregate_csv, write_curriculum_csv, write_run_csv
from .runner import (
    AggregateRow,
    ExperimentResult,
    ExperimentSetup,
    aggregate,
    prepare,
    run_experiment,
    run_single,
)

__all__ = [
    # cli
    "cli_main",
    "main",
    # config
    "EnvironmentConfig",
    "ExperimentConfig",
    "ExpertConfig",
    "LearnerConfig",
    "OutputConfig",
    "StrategyConfig",
    "StrategyFamily",
    "StrategySpec",
    # metrics
    "metric_callbacks",
    "metric_feature_mismatch",
    "metric_reward_gap",
    # report
    "plot_error_curves",
    "write_aggregate_csv",
    "write_curriculum_csv",
    "write_run_csv",
    # runner
    "AggregateRow",
    "ExperimentResult",
    "ExperimentSetup",
    "aggregate",
    "prepare",
    "run_experiment",
    "run_single",
]
