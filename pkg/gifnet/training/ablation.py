"""Component ablation: train configuration variants and compare fused quality."""

import logging
from collections.abc import Callable, Mapping
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

from gifnet.data import DatasetManifest, load_joint_sample
from gifnet.errors import ConfigError, DatasetError
from gifnet.fusion import ColorSource, FusionRequest, fuse_pair
from gifnet.metrics import METRIC_NAMES, MetricReport, evaluate_triple
from gifnet.network import ArchConfig, GIFNet, Interaction
from gifnet.training.config import Tasks, TrainConfig
from gifnet.training.report import StepReport
from gifnet.training.trainer import train_loop

# Configure logging
logger = logging.getLogger(__name__)

ABLATION_FILE = "ablation.tsv"

# TrainConfig overrides of each built-in variant, from most reduced to full
ABLATION_VARIANTS: dict[str, dict[str, Any]] = {
    "mm-only": {"tasks": Tasks.MM_ONLY, "interaction": Interaction.NONE, "use_rec": False},
    "mm-dp-no-rec": {"use_rec": False},
    "mm-dp-add": {"interaction": Interaction.ADD},
    "full": {},
}


@dataclass(frozen=True)
class AblationRow:
    """Mean holdout metrics of one trained variant."""

    variant: str
    ei: float
    ag: float
    vif: float
    scd: float

    def to_line(self) -> str:
        return "\t".join(
            [self.variant, *(f"{getattr(self, m):.6f}" for m in METRIC_NAMES)],
        )


@dataclass
class AblationReport:
    """Rows of an ablation run in variant order."""

    rows: list[AblationRow]

    def row(self, variant: str) -> AblationRow:
        for row in self.rows:
            if row.variant == variant:
                return row
        raise KeyError(variant)

    def to_tsv(self) -> str:
        lines = ["\t".join(("variant", *METRIC_NAMES))]
        lines += [row.to_line() for row in self.rows]
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_tsv(), encoding="utf-8")
        return path


def evaluate_holdout(model: GIFNet, holdout: DatasetManifest) -> MetricReport:
    """Fuse every holdout (visible, infrared) pair and score the luma output.

    Raises:
        DatasetError: If the holdout manifest is empty
    """
    if len(holdout) == 0:
        raise DatasetError("Holdout manifest has no entries")
    rows = []
    for entry in holdout.entries:
        sample = load_joint_sample(holdout, entry)
        fused = fuse_pair(model, FusionRequest(sample.vis, sample.ir, ColorSource.NONE))
        rows.append(evaluate_triple(fused, sample.vis, sample.ir, id=entry.id))
    return MetricReport(rows)


def run_ablation(
    train_manifest: DatasetManifest,
    holdout_manifest: DatasetManifest,
    base_config: TrainConfig,
    arch: ArchConfig | None = None,
    variants: Mapping[str, Mapping[str, Any]] | None = None,
    out_dir: str | Path | None = None,
    on_step: Callable[[str, StepReport], None] | None = None,
) -> AblationReport:
    """Train each variant from the same seed and budget, then evaluate it.

    Args:
        train_manifest: Joint training dataset
        holdout_manifest: Pairs used for evaluation
        base_config: Settings shared by all variants
        arch: Architecture shared by all variants
        variants: Variant name to TrainConfig overrides; built-ins when omitted
        out_dir: Directory for ``ablation.tsv`` and ``<variant>.ckpt`` files
        on_step: Callback receiving (variant, StepReport)

    Returns:
        AblationReport with one row per variant

    Raises:
        ConfigError: If a variant overrides an unknown TrainConfig field
    """
    variants = dict(variants if variants is not None else ABLATION_VARIANTS)
    out_dir = Path(out_dir) if out_dir is not None else None
    rows = []
    for name, overrides in variants.items():
        try:
            config = replace(base_config, **overrides)
        except TypeError as exc:
            raise ConfigError(f"Variant '{name}' has an invalid override: {exc}") from exc

        logger.info(f"Ablation variant '{name}': {dict(overrides) or 'full model'}")
        result = train_loop(
            train_manifest,
            config,
            arch,
            out_path=out_dir / f"{name}.ckpt" if out_dir else None,
            on_step=(lambda report, name=name: on_step(name, report)) if on_step else None,
        )
        mean = evaluate_holdout(result.model, holdout_manifest).aggregate
        rows.append(AblationRow(name, mean.ei, mean.ag, mean.vif, mean.scd))

    report = AblationReport(rows)
    if out_dir is not None:
        report.write(out_dir / ABLATION_FILE)
    return report
