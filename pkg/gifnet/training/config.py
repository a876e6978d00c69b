"""Training configuration and schedule enumerations."""

from dataclasses import dataclass
from enum import Enum
from typing import TypeVar

from gifnet.errors import ConfigError
from gifnet.losses.saliency import DEFAULT_SCORER
from gifnet.network.cfgm import Branch, Interaction

E = TypeVar("E", bound=Enum)


class Role(str, Enum):
    """Which branch is main (trained) in a step."""

    MM_MAIN = "MM-main"
    DP_MAIN = "DP-main"

    @property
    def branch(self) -> Branch:
        """The main branch of this role."""
        return Branch.MM if self is Role.MM_MAIN else Branch.DP


class Alternation(str, Enum):
    """Granularity of the MM/DP role swap."""

    PER_STEP = "per-step"
    PER_EPOCH = "per-epoch"


class Tasks(str, Enum):
    """Which tasks are trained."""

    BOTH = "both"
    MM_ONLY = "mm-only"
    DP_ONLY = "dp-only"


def coerce_choice(enum_cls: type[E], value: object, key: str) -> E:
    """Convert ``value`` to a member of ``enum_cls``.

    Raises:
        ConfigError: If ``value`` names no member
    """
    try:
        return enum_cls(value)
    except ValueError as exc:
        choices = ", ".join(str(m.value) for m in enum_cls)
        raise ConfigError(f"{key} must be one of: {choices}; got '{value}'") from exc


@dataclass
class TrainConfig:
    """Hyperparameters of a training run."""

    steps: int = 200
    batch: int = 1
    crop: int = 64
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0
    alternation: Alternation = Alternation.PER_STEP
    checkpoint_every: int = 0
    grad_clip: float = 1.0
    tasks: Tasks = Tasks.BOTH
    use_rec: bool = True
    interaction: Interaction = Interaction.CFGM
    raw_softmax: bool = False
    saliency: str = DEFAULT_SCORER
    saliency_weights: str | None = None
    workers: int = 0

    def __post_init__(self) -> None:
        """Coerce enumerations and validate ranges.

        Raises:
            ConfigError: If any value is out of range
        """
        self.alternation = coerce_choice(Alternation, self.alternation, "alternation")
        self.tasks = coerce_choice(Tasks, self.tasks, "tasks")
        self.interaction = coerce_choice(Interaction, self.interaction, "interaction")

        if self.steps <= 0:
            raise ConfigError(f"steps must be > 0, got {self.steps}")
        if self.batch <= 0:
            raise ConfigError(f"batch must be > 0, got {self.batch}")
        if self.crop <= 0:
            raise ConfigError(f"crop must be > 0, got {self.crop}")
        if self.lr <= 0:
            raise ConfigError(f"lr must be > 0, got {self.lr}")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise ConfigError(f"betas must lie in [0, 1), got ({self.beta1}, {self.beta2})")
        if self.eps <= 0:
            raise ConfigError(f"eps must be > 0, got {self.eps}")
        if self.checkpoint_every < 0:
            raise ConfigError(f"checkpoint_every must be >= 0, got {self.checkpoint_every}")
        if self.grad_clip < 0:
            raise ConfigError(f"grad_clip must be >= 0, got {self.grad_clip}")
        if self.workers < 0:
            raise ConfigError(f"workers must be >= 0, got {self.workers}")

    def check_crop(self, window: int) -> None:
        """Require the crop to be a window multiple of at least 11 pixels.

        Raises:
            ConfigError: If it is not
        """
        if self.crop % window:
            raise ConfigError(
                f"crop ({self.crop}) must be divisible by the attention window ({window})",
            )
        if self.crop < 11:
            raise ConfigError(f"crop must be >= 11 for the SSIM window, got {self.crop}")

    def role_for_step(self, step: int, steps_per_epoch: int = 1) -> Role:
        """Role of 0-based ``step`` under the task selection and alternation.

        Per-step alternation puts MM on even steps; per-epoch alternation
        swaps roles every ``steps_per_epoch`` steps, starting with MM.
        """
        if self.tasks is Tasks.MM_ONLY:
            return Role.MM_MAIN
        if self.tasks is Tasks.DP_ONLY:
            return Role.DP_MAIN
        unit = step if self.alternation is Alternation.PER_STEP else step // steps_per_epoch
        return Role.MM_MAIN if unit % 2 == 0 else Role.DP_MAIN
