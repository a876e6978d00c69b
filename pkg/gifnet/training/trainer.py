"""File: trainer.py.

Alternating multi-task optimization. Each step designates one branch as
main: it is trained together with the shared encoder and both decoders,
while the other branch is frozen and only supplies auxiliary features.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path

import torch
from torch.utils.data import DataLoader

from gifnet.data import DatasetManifest, JointCropDataset
from gifnet.errors import DatasetError, NonFiniteLossError
from gifnet.losses import (
    LossValue,
    SaliencyScorer,
    ScorerRegistry,
    MixWeights,
    dp_private_loss,
    mean_loss,
    mixing_weights,
    mm_private_loss,
    public_loss,
    total_loss,
)
from gifnet.network import ArchConfig, Branch, GIFNet, build_model, save_checkpoint
from gifnet.training.config import Role, TrainConfig
from gifnet.training.report import StepReport

# Configure logging
logger = logging.getLogger(__name__)

Batch = dict[str, torch.Tensor]


def checkpoint_path_for_step(out_path: str | Path, step: int) -> Path:
    """Path of the periodic checkpoint written after ``step`` steps."""
    out_path = Path(out_path)
    return out_path.with_name(f"{out_path.name}.step{step:06d}")


def default_log_path(out_path: str | Path) -> Path:
    """Report log written next to the final checkpoint."""
    out_path = Path(out_path)
    return out_path.with_name(f"{out_path.name}.log")


@dataclass
class TrainResult:
    """Final model and the per-step reports of a run."""

    model: GIFNet
    reports: list[StepReport] = field(default_factory=list)


class Trainer:
    """Owns the model, optimizer and saliency scorer of one training run."""

    def __init__(
        self,
        config: TrainConfig,
        arch: ArchConfig | None = None,
        model: GIFNet | None = None,
        scorer: SaliencyScorer | None = None,
    ) -> None:
        """Initialize the trainer.

        Args:
            config: Training hyperparameters
            arch: Architecture of a freshly built model (ignored if ``model`` is given)
            model: Existing model to keep training
            scorer: Saliency scorer; built from ``config.saliency`` when omitted
        """
        self.config = config
        self.model = model if model is not None else build_model(arch, seed=config.seed)
        self.model.interaction = config.interaction
        config.check_crop(self.model.arch.window)
        self.scorer = scorer or ScorerRegistry.create(
            config.saliency,
            weights_path=config.saliency_weights,
        )
        self.optimizer = torch.optim.Adam(
            self.model.parameters(),
            lr=config.lr,
            betas=(config.beta1, config.beta2),
            eps=config.eps,
        )

    def freeze_for(self, role: Role) -> None:
        """Make the main branch trainable and the auxiliary branch frozen."""
        self.model.branch(role.branch).requires_grad_(True)
        self.model.branch(role.branch.other).requires_grad_(False)

    def trainable_parameters(self) -> list[torch.nn.Parameter]:
        return [p for p in self.model.parameters() if p.requires_grad]

    def sample_weights(self, batch: Batch) -> list[MixWeights]:
        """MM mixing weights of each sample, scored on that sample alone."""
        return [
            mixing_weights(
                self.scorer.score(batch["ir"][i : i + 1]),
                self.scorer.score(batch["vis"][i : i + 1]),
                raw=self.config.raw_softmax,
            )
            for i in range(batch["ir"].shape[0])
        ]

    def compute_loss(self, batch: Batch, role: Role) -> LossValue:
        """Forward pass and objective of one step (no parameter update)."""
        model = self.model
        if role.branch is Branch.MM:
            main_pair, aux_pair = (batch["vis"], batch["ir"]), (batch["near"], batch["far"])
            target = batch["vis"]
        else:
            main_pair, aux_pair = (batch["near"], batch["far"]), (batch["vis"], batch["ir"])
            target = batch["gt"]

        shared_main = model.encode_pair(*main_pair)
        with torch.no_grad():
            shared_aux = model.encode_pair(*aux_pair)
        fused = model.gdec_forward(
            model.branch_forward(shared_main, shared_aux, role.branch, self.config.interaction),
        )

        if self.config.use_rec:
            pub = public_loss(model.rec_forward(shared_main), target)
        else:
            pub = LossValue.zero("ssim", "mse")

        if role.branch is Branch.MM:
            pri = mean_loss(
                [
                    mm_private_loss(fused[i : i + 1], batch["ir"][i : i + 1], batch["vis"][i : i + 1], weights)
                    for i, weights in enumerate(self.sample_weights(batch))
                ],
            )
        else:
            pri = dp_private_loss(fused, batch["gt"])
        return total_loss(pub, pri)

    def train_step(self, batch: Batch, role: Role, step: int = 0) -> StepReport:
        """One optimization step with ``role`` deciding main and frozen branches.

        Raises:
            NonFiniteLossError: If the loss is NaN or infinite
        """
        self.model.train()
        self.freeze_for(role)
        loss = self.compute_loss(batch, role)
        if not math.isfinite(loss.parts["total"]):
            raise NonFiniteLossError(
                f"Non-finite loss at step {step} ({role.value})",
                parts=loss.parts,
            )

        self.optimizer.zero_grad(set_to_none=True)
        loss.scalar.backward()
        if self.config.grad_clip > 0:
            torch.nn.utils.clip_grad_norm_(self.trainable_parameters(), self.config.grad_clip)
        self.optimizer.step()

        report = StepReport(step, role, loss, self.model.lambda_values())
        logger.debug(
            f"step {step} {role.value}: total={loss.parts['total']:.6f} "
            f"pub={loss.parts['pub']:.6f} pri={loss.parts['pri']:.6f}",
        )
        return report

    def loader(self, manifest: DatasetManifest) -> DataLoader:
        """Seeded, unshuffled loader serving exactly ``steps`` batches in manifest order."""
        dataset = JointCropDataset(
            manifest,
            crop=self.config.crop,
            seed=self.config.seed,
            length=self.config.steps * self.config.batch,
        )
        workers = self.config.workers
        return DataLoader(
            dataset,
            batch_size=self.config.batch,
            shuffle=False,
            num_workers=workers,
            prefetch_factor=2 if workers else None,
            persistent_workers=False,
        )

    def run(
        self,
        manifest: DatasetManifest,
        out_path: str | Path | None = None,
        log_path: str | Path | None = None,
        on_step: Callable[[StepReport], None] | None = None,
    ) -> TrainResult:
        """Train for ``config.steps`` steps.

        Args:
            manifest: Joint dataset
            out_path: Final checkpoint path; periodic checkpoints go next to it
            log_path: Report log path; ``<out_path>.log`` when omitted
            on_step: Callback receiving every StepReport

        Returns:
            TrainResult with the trained model and all reports

        Raises:
            DatasetError: If the manifest is empty
            NonFiniteLossError: If a step produces a non-finite loss
        """
        if len(manifest) == 0:
            raise DatasetError("Cannot train on an empty manifest")
        if log_path is None and out_path is not None:
            log_path = default_log_path(out_path)

        steps_per_epoch = max(1, math.ceil(len(manifest) / self.config.batch))
        result = TrainResult(self.model)
        log_file = None
        if log_path is not None:
            Path(log_path).parent.mkdir(parents=True, exist_ok=True)
            log_file = open(log_path, "w", encoding="utf-8")

        logger.info(
            f"Training {self.config.steps} steps on {len(manifest)} samples "
            f"(tasks={self.config.tasks.value}, interaction={self.config.interaction.value})",
        )
        try:
            for step, batch in enumerate(self.loader(manifest)):
                role = self.config.role_for_step(step, steps_per_epoch)
                report = self.train_step(batch, role, step)
                result.reports.append(report)
                if log_file is not None:
                    log_file.write(report.to_line() + "\n")
                    log_file.flush()
                if on_step is not None:
                    on_step(report)
                every = self.config.checkpoint_every
                if out_path is not None and every and (step + 1) % every == 0:
                    save_checkpoint(self.model, checkpoint_path_for_step(out_path, step + 1))
        finally:
            if log_file is not None:
                log_file.close()

        if out_path is not None:
            save_checkpoint(self.model, out_path)
        self.model.eval()
        return result


def train_loop(
    manifest: DatasetManifest,
    config: TrainConfig,
    arch: ArchConfig | None = None,
    out_path: str | Path | None = None,
    log_path: str | Path | None = None,
    on_step: Callable[[StepReport], None] | None = None,
) -> TrainResult:
    """Build a model from ``config.seed`` and train it on ``manifest``."""
    trainer = Trainer(config, arch)
    return trainer.run(manifest, out_path, log_path, on_step)
