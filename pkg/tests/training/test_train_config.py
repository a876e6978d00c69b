"""Tests for the training configuration and role schedule."""

import os
import sys

import pytest

# Add the root directory to the path for direct imports
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "../..")))

from gifnet.errors import ConfigError
from gifnet.network import Branch, Interaction
from gifnet.training import Alternation, Role, Tasks, TrainConfig


def test_defaults():
    """Test the default hyperparameters."""
    config = TrainConfig()
    assert config.crop == 64
    assert config.lr == 1e-3
    assert (config.beta1, config.beta2, config.eps) == (0.9, 0.999, 1e-8)
    assert config.alternation is Alternation.PER_STEP
    assert config.interaction is Interaction.CFGM
    assert config.saliency == "spatial-grad"


def test_string_choices_are_coerced():
    """Test that enumerations accept their string values."""
    config = TrainConfig(alternation="per-epoch", tasks="dp-only", interaction="add")
    assert config.alternation is Alternation.PER_EPOCH
    assert config.tasks is Tasks.DP_ONLY
    assert config.interaction is Interaction.ADD


@pytest.mark.parametrize(
    "kwargs",
    [
        {"steps": 0},
        {"batch": 0},
        {"lr": 0.0},
        {"beta1": 1.0},
        {"eps": 0.0},
        {"checkpoint_every": -1},
        {"grad_clip": -0.5},
        {"workers": -1},
        {"alternation": "hourly"},
        {"tasks": "all"},
    ],
)
def test_invalid_values(kwargs):
    """Test that out-of-range settings raise ConfigError."""
    with pytest.raises(ConfigError):
        TrainConfig(**kwargs)


def test_check_crop():
    """Test that the crop must fit the window and the SSIM kernel."""
    TrainConfig(crop=16).check_crop(8)
    with pytest.raises(ConfigError, match="divisible"):
        TrainConfig(crop=20).check_crop(8)
    with pytest.raises(ConfigError, match="SSIM"):
        TrainConfig(crop=8).check_crop(8)


def test_per_step_alternation():
    """Test that MM is main on even steps and DP on odd steps."""
    config = TrainConfig()
    roles = [config.role_for_step(step) for step in range(4)]
    assert roles == [Role.MM_MAIN, Role.DP_MAIN, Role.MM_MAIN, Role.DP_MAIN]


def test_per_epoch_alternation():
    """Test that roles swap once per epoch."""
    config = TrainConfig(alternation="per-epoch")
    roles = [config.role_for_step(step, steps_per_epoch=3) for step in range(7)]
    assert roles == [Role.MM_MAIN] * 3 + [Role.DP_MAIN] * 3 + [Role.MM_MAIN]


def test_single_task_schedules():
    """Test that single-task runs never swap roles."""
    assert {TrainConfig(tasks="mm-only").role_for_step(s) for s in range(5)} == {Role.MM_MAIN}
    assert {TrainConfig(tasks="dp-only").role_for_step(s) for s in range(5)} == {Role.DP_MAIN}


def test_role_branch():
    """Test the role to branch mapping."""
    assert Role.MM_MAIN.branch is Branch.MM
    assert Role.DP_MAIN.branch is Branch.DP
