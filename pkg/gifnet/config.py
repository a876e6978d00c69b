"""Run configuration for gifnet.

This module handles the ``key = value`` configuration file, its typed
defaults, and the layering of defaults, file values and command-line flags
into the configuration objects used by each command.
"""

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from gifnet.data import AugmentConfig, MaskKind
from gifnet.errors import ConfigError
from gifnet.losses import ScorerRegistry
from gifnet.network import ArchConfig, Interaction
from gifnet.training import Alternation, Tasks, TrainConfig

# Configure logging
logger = logging.getLogger(__name__)

# Environment variable capping torch intra-op threads; wins over ``threads``
THREADS_ENV = "GIFNET_THREADS"

# Default configuration values
DEFAULT_CONFIG: dict[str, Any] = {
    # Architecture
    "base_channels": 16,
    "enc_layers": 3,
    "branch_layers": 4,
    "embed_dim": 32,
    "heads": 2,
    "window": 8,
    "mlp_ratio": 2.0,
    # Training
    "steps": 200,
    "batch": 1,
    "crop": 64,
    "lr": 1e-3,
    "beta1": 0.9,
    "beta2": 0.999,
    "eps": 1e-8,
    "seed": 0,
    "alternation": Alternation.PER_STEP.value,
    "checkpoint_every": 0,
    "grad_clip": 1.0,
    "tasks": Tasks.BOTH.value,
    "use_rec": True,
    "interaction": Interaction.CFGM.value,
    "raw_softmax": False,
    "saliency": "spatial-grad",
    "saliency_weights": "",
    "workers": 0,
    # Dataset augmentation
    "sigma": 3.0,
    "mask": MaskKind.CENTERED_DISK.value,
    "augment_workers": 1,
    # Runtime
    "threads": 0,
}

# Config keys that should be type-checked
CONFIG_TYPES: dict[str, type] = {
    "base_channels": int,
    "enc_layers": int,
    "branch_layers": int,
    "embed_dim": int,
    "heads": int,
    "window": int,
    "mlp_ratio": float,
    "steps": int,
    "batch": int,
    "crop": int,
    "lr": float,
    "beta1": float,
    "beta2": float,
    "eps": float,
    "seed": int,
    "alternation": str,
    "checkpoint_every": int,
    "grad_clip": float,
    "tasks": str,
    "use_rec": bool,
    "interaction": str,
    "raw_softmax": bool,
    "saliency": str,
    "saliency_weights": str,
    "workers": int,
    "sigma": float,
    "mask": str,
    "augment_workers": int,
    "threads": int,
}

# Allowed values of enumerated keys
CONFIG_CHOICES: dict[str, tuple[str, ...]] = {
    "alternation": tuple(a.value for a in Alternation),
    "tasks": tuple(t.value for t in Tasks),
    "interaction": tuple(i.value for i in Interaction),
    "mask": tuple(m.value for m in MaskKind),
    "saliency": tuple(ScorerRegistry.names()),
}

ARCH_KEYS = (
    "base_channels",
    "enc_layers",
    "branch_layers",
    "embed_dim",
    "heads",
    "window",
    "mlp_ratio",
)
TRAIN_KEYS = (
    "steps",
    "batch",
    "crop",
    "lr",
    "beta1",
    "beta2",
    "eps",
    "seed",
    "alternation",
    "checkpoint_every",
    "grad_clip",
    "tasks",
    "use_rec",
    "interaction",
    "raw_softmax",
    "saliency",
    "saliency_weights",
    "workers",
)

_TRUE = ("true", "yes", "y", "1")
_FALSE = ("false", "no", "n", "0")


def coerce_value(key: str, value: Any) -> Any:
    """Convert ``value`` to the declared type of ``key``.

    Args:
        key: Configuration key
        value: Raw value (string from a file, or a typed flag value)

    Returns:
        The typed value

    Raises:
        ConfigError: If the key is unknown, or the value cannot be converted
            or is not an allowed choice
    """
    if key not in CONFIG_TYPES:
        raise ConfigError(f"Unknown config key: '{key}'")
    expected_type = CONFIG_TYPES[key]

    if expected_type is bool and isinstance(value, str):
        lowered = value.strip().lower()
        if lowered in _TRUE:
            value = True
        elif lowered in _FALSE:
            value = False
        else:
            raise ConfigError(f"Invalid boolean for '{key}': '{value}'")
    elif expected_type is int and isinstance(value, float):
        raise ConfigError(f"Invalid type for config key '{key}': expected int, got {value}")
    else:
        try:
            value = expected_type(value)
        except (ValueError, TypeError):
            raise ConfigError(
                f"Invalid type for config key '{key}': "
                f"expected {expected_type.__name__}, got '{value}'",
            ) from None

    choices = CONFIG_CHOICES.get(key)
    if choices and value not in choices:
        raise ConfigError(
            f"Invalid value for '{key}': '{value}' (expected one of: {', '.join(choices)})",
        )
    return value


def parse_config_text(text: str, source: str = "<config>") -> dict[str, Any]:
    """Parse ``key = value`` lines; ``#`` starts a comment.

    Raises:
        ConfigError: On malformed lines, unknown keys or invalid values,
            naming the offending line
    """
    values: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got '{raw.strip()}'")
        try:
            values[key.strip()] = coerce_value(key.strip(), value.strip())
        except ConfigError as exc:
            raise ConfigError(f"{source}:{lineno}: {exc}") from None
    return values


def load_config_file(path: str | Path) -> dict[str, Any]:
    """Read and parse a configuration file.

    Raises:
        ConfigError: If the file cannot be read or parsed
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"Cannot read config file '{path}': {exc}") from exc
    values = parse_config_text(text, str(path))
    logger.debug(f"Loaded {len(values)} config values from {path}")
    return values


@dataclass
class RunConfig:
    """Effective configuration of one command: defaults < file < flags."""

    values: dict[str, Any] = field(default_factory=lambda: DEFAULT_CONFIG.copy())

    @classmethod
    def build(
        cls,
        config_file: str | Path | None = None,
        overrides: dict[str, Any] | None = None,
    ) -> "RunConfig":
        """Layer the config file and flag overrides over the defaults.

        Overrides whose value is None are ignored, so unset flags never
        mask file values.
        """
        values = DEFAULT_CONFIG.copy()
        if config_file is not None:
            values.update(load_config_file(config_file))
        for key, value in (overrides or {}).items():
            if value is not None:
                values[key] = coerce_value(key, value)
        return cls(values)

    def get(self, key: str) -> Any:
        """Effective value of ``key``."""
        if key not in self.values:
            raise ConfigError(f"Unknown config key: '{key}'")
        return self.values[key]

    @property
    def arch(self) -> ArchConfig:
        return ArchConfig(**{k: self.values[k] for k in ARCH_KEYS})

    @property
    def train(self) -> TrainConfig:
        kwargs = {k: self.values[k] for k in TRAIN_KEYS}
        kwargs["saliency_weights"] = kwargs["saliency_weights"] or None
        config = TrainConfig(**kwargs)
        config.check_crop(self.arch.window)
        return config

    @property
    def augment(self) -> AugmentConfig:
        return AugmentConfig(
            seed=self.values["seed"],
            sigma=self.values["sigma"],
            mask_kind=MaskKind.parse(self.values["mask"]),
            workers=self.values["augment_workers"],
        )

    def threads(self) -> int | None:
        """Thread cap from ``GIFNET_THREADS`` or the ``threads`` key (0 means unset).

        Raises:
            ConfigError: If the environment value is not a positive integer
        """
        env = os.environ.get(THREADS_ENV)
        if env:
            try:
                count = int(env)
            except ValueError:
                count = 0
            if count < 1:
                raise ConfigError(f"{THREADS_ENV} must be a positive integer, got '{env}'")
            return count
        configured = self.values["threads"]
        if configured < 0:
            raise ConfigError(f"threads must be >= 0, got {configured}")
        return configured or None
