"""Fusion quality metrics (EI, AG, VIF, SCD) and the batch evaluator."""

from .evaluate import (
    MEAN_ID,
    METRIC_NAMES,
    MetricReport,
    MetricRow,
    evaluate_dir,
    evaluate_triple,
)
from .quality import (
    as_plane,
    metric_ag,
    metric_ei,
    metric_scd,
    metric_vif,
    pearson,
    sobel_magnitude,
    vif_single,
)

__all__ = [
    "MEAN_ID",
    "METRIC_NAMES",
    "MetricReport",
    "MetricRow",
    "as_plane",
    "evaluate_dir",
    "evaluate_triple",
    "metric_ag",
    "metric_ei",
    "metric_scd",
    "metric_vif",
    "pearson",
    "sobel_magnitude",
    "vif_single",
]
