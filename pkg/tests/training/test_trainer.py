"""Tests for the alternating trainer."""

import os
import sys

import pytest
import torch

# Add the root directory to the path for direct imports
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "../..")))

from gifnet.errors import DatasetError, NonFiniteLossError
from gifnet.network import load_checkpoint
from gifnet.training import (
    Role,
    Trainer,
    TrainConfig,
    checkpoint_path_for_step,
    default_log_path,
    read_log,
    train_loop,
)


def _snapshot(module):
    return {name: p.detach().clone() for name, p in module.named_parameters()}


def _unchanged(before, module):
    return all(torch.equal(before[name], p) for name, p in module.named_parameters())


@pytest.fixture
def trainer(tiny_arch):
    """Trainer over the tiny architecture with 16-pixel crops."""
    return Trainer(TrainConfig(steps=2, crop=16, lr=1e-3), tiny_arch)


@pytest.fixture
def batch(trainer, joint_manifest):
    """First batch served by the trainer's loader."""
    return next(iter(trainer.loader(joint_manifest)))


def test_batch_layout(batch):
    """Test the loader batch layout."""
    assert set(batch) == {"vis", "ir", "near", "far", "gt"}
    assert batch["vis"].shape == (1, 1, 16, 16)


def test_auxiliary_branch_is_frozen_exactly(trainer, batch):
    """Test that only the main branch and shared modules change in a step."""
    model = trainer.model
    for role, frozen, trained in (
        (Role.MM_MAIN, model.dp_branch, model.mm_branch),
        (Role.DP_MAIN, model.mm_branch, model.dp_branch),
    ):
        frozen_before = _snapshot(frozen)
        trained_before = _snapshot(trained)
        encoder_before = _snapshot(model.encoder)
        gdec_before = _snapshot(model.global_decoder)
        rec_before = _snapshot(model.rec_decoder)

        trainer.train_step(batch, role)

        assert _unchanged(frozen_before, frozen)
        assert not _unchanged(trained_before, trained)
        assert not _unchanged(encoder_before, model.encoder)
        assert not _unchanged(gdec_before, model.global_decoder)
        assert not _unchanged(rec_before, model.rec_decoder)


def test_step_report(trainer, batch):
    """Test the report of one step."""
    report = trainer.train_step(batch, Role.MM_MAIN, step=5)
    assert report.step == 5
    assert report.role is Role.MM_MAIN
    assert report.total == report.loss.parts["pub"] + report.loss.parts["pri"]
    assert {"pri.w_ir", "pri.w_vis", "pub.ssim", "pub.mse"} <= set(report.loss.parts)
    assert len(report.lambda_values) == 2


def test_disabled_rec_has_zero_public_loss(tiny_arch, joint_manifest):
    """Test that the REC loss vanishes when disabled."""
    trainer = Trainer(TrainConfig(steps=1, crop=16, use_rec=False), tiny_arch)
    batch = next(iter(trainer.loader(joint_manifest)))
    loss = trainer.compute_loss(batch, Role.DP_MAIN)
    assert loss.parts["pub"] == 0.0
    assert loss.parts["total"] == loss.parts["pri"]


def test_non_finite_loss_aborts(trainer, batch):
    """Test that a NaN loss raises with its parts attached."""
    batch = dict(batch)
    batch["gt"] = torch.full_like(batch["gt"], float("nan"))
    with pytest.raises(NonFiniteLossError) as info:
        trainer.train_step(batch, Role.DP_MAIN, step=7)
    assert "step 7" in str(info.value)
    assert "pri" in info.value.parts


def test_update_follows_negative_gradient(tiny_arch, joint_manifest):
    """Test that a small plain step on one encoder weight lowers the loss as finite differences predict."""
    trainer = Trainer(TrainConfig(steps=1, crop=16, grad_clip=0.0), tiny_arch)
    batch = next(iter(trainer.loader(joint_manifest)))
    weight = trainer.model.encoder.blocks[0].conv.weight

    trainer.model.train()
    trainer.freeze_for(Role.DP_MAIN)
    loss = trainer.compute_loss(batch, Role.DP_MAIN)
    (grad,) = torch.autograd.grad(loss.scalar, weight)
    index = tuple(int(i) for i in torch.nonzero(grad.abs() == grad.abs().max())[0])

    h = 1e-3
    with torch.no_grad():
        original = weight[index].item()
        weight[index] = original + h
        plus = trainer.compute_loss(batch, Role.DP_MAIN).value
        weight[index] = original - h
        minus = trainer.compute_loss(batch, Role.DP_MAIN).value
        weight[index] = original
    finite_difference = (plus - minus) / (2 * h)
    assert finite_difference == pytest.approx(float(grad[index]), rel=0.1, abs=1e-3)

    before = weight[index].item()
    trainer.train_step(batch, Role.DP_MAIN)
    assert (weight[index].item() - before) * finite_difference < 0


def test_run_writes_log_and_checkpoints(temp_directory, tiny_arch, joint_manifest):
    """Test a short run end to end."""
    out = os.path.join(temp_directory, "model.ckpt")
    seen = []
    config = TrainConfig(steps=4, crop=16, lr=1e-3, checkpoint_every=2)
    result = train_loop(joint_manifest, config, tiny_arch, out_path=out, on_step=seen.append)

    assert [r.role for r in result.reports] == [Role.MM_MAIN, Role.DP_MAIN] * 2
    assert len(seen) == 4
    assert not result.model.training

    records = read_log(default_log_path(out))
    assert [r.step for r in records] == [0, 1, 2, 3]
    for record, report in zip(records, result.reports, strict=True):
        assert record.pub + record.pri == record.total
        assert record.total == report.total

    assert checkpoint_path_for_step(out, 2).is_file()
    assert checkpoint_path_for_step(out, 4).is_file()
    restored = load_checkpoint(out)
    assert restored.lambda_values() == result.model.lambda_values()


def test_runs_are_deterministic(temp_directory, tiny_arch, joint_manifest):
    """Test that a fixed seed reproduces the final checkpoint byte for byte."""
    config = TrainConfig(steps=3, crop=16, lr=1e-3, seed=9)
    paths = []
    for name in ("a.ckpt", "b.ckpt"):
        path = os.path.join(temp_directory, name)
        train_loop(joint_manifest, config, tiny_arch, out_path=path)
        paths.append(path)
    with open(paths[0], "rb") as fa, open(paths[1], "rb") as fb:
        assert fa.read() == fb.read()


def test_empty_manifest(trainer, joint_manifest):
    """Test that training needs samples."""
    joint_manifest.entries = []
    with pytest.raises(DatasetError):
        trainer.run(joint_manifest)


def test_checkpoint_path_helpers():
    """Test the derived artifact names."""
    assert checkpoint_path_for_step("out/m.ckpt", 12).name == "m.ckpt.step000012"
    assert default_log_path("out/m.ckpt").name == "m.ckpt.log"


def test_mixing_weights_are_per_sample(trainer):
    """Test that each sample of a batch gets weights from its own saliency scores."""
    gen = torch.Generator().manual_seed(0)
    textured = torch.rand(1, 1, 16, 16, generator=gen)
    flat = torch.full((1, 1, 16, 16), 0.5)
    batch = {
        "ir": torch.cat([textured, flat]),
        "vis": torch.cat([flat, textured]),
        "near": torch.cat([textured, textured]),
        "far": torch.cat([flat, flat]),
        "gt": torch.cat([textured, textured]),
    }

    first, second = trainer.sample_weights(batch)
    assert first.w_ir > first.w_vis
    assert second.w_vis > second.w_ir
    assert first.w_ir == pytest.approx(second.w_vis)

    with torch.no_grad():
        loss = trainer.compute_loss(batch, Role.MM_MAIN)
    assert loss.parts["pri.w_ir"] == pytest.approx((first.w_ir + second.w_ir) / 2)
