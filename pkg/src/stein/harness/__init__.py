from .config import ConfigError, ExperimentConfig, load_experiment_config, load_params
from .experiments import CATALOG, Experiment, get_experiment
from .runner import (CSV_HEADER, RunRecord, TrendReport, csv_row,
                     run_experiment, run_suite, summary_markdown,
                     trend_report, write_csv)

__all__ = [
    "CATALOG", "CSV_HEADER", "ConfigError", "Experiment", "ExperimentConfig",
    "RunRecord", "TrendReport", "csv_row", "get_experiment",
    "load_experiment_config", "load_params", "run_experiment", "run_suite",
    "summary_markdown", "trend_report", "write_csv",
]
