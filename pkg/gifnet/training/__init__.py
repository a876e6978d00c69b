"""Alternating multi-task training and the component ablation runner."""

from .ablation import (
    ABLATION_FILE,
    ABLATION_VARIANTS,
    AblationReport,
    AblationRow,
    evaluate_holdout,
    run_ablation,
)
from .config import Alternation, Role, Tasks, TrainConfig, coerce_choice
from .report import LogRecord, StepReport, parse_log_line, read_log
from .trainer import (
    TrainResult,
    Trainer,
    checkpoint_path_for_step,
    default_log_path,
    train_loop,
)

__all__ = [
    "ABLATION_FILE",
    "ABLATION_VARIANTS",
    "AblationReport",
    "AblationRow",
    "Alternation",
    "LogRecord",
    "Role",
    "StepReport",
    "Tasks",
    "TrainConfig",
    "TrainResult",
    "Trainer",
    "checkpoint_path_for_step",
    "coerce_choice",
    "default_log_path",
    "evaluate_holdout",
    "parse_log_line",
    "read_log",
    "run_ablation",
    "train_loop",
]
