"""Architecture configuration."""

from dataclasses import astuple, dataclass, fields

from gifnet.errors import ConfigError

# Encoder input width; 1-channel inputs are replicated to it
ENCODER_IN_CHANNELS = 3


@dataclass(frozen=True)
class ArchConfig:
    """Sizes of the shared encoder, task branches and decoders."""

    base_channels: int = 16
    enc_layers: int = 3
    branch_layers: int = 4
    embed_dim: int = 32
    heads: int = 2
    window: int = 8
    mlp_ratio: float = 2.0

    def __post_init__(self) -> None:
        """Validate the configuration.

        Raises:
            ConfigError: If a size is non-positive, branch_layers is odd or
                embed_dim is not divisible by heads
        """
        for f in fields(self):
            value = getattr(self, f.name)
            if value <= 0:
                raise ConfigError(f"ArchConfig.{f.name} must be > 0, got {value}")
        if self.branch_layers % 2:
            raise ConfigError(
                f"branch_layers must be even, got {self.branch_layers}",
            )
        if self.embed_dim % self.heads:
            raise ConfigError(
                f"embed_dim ({self.embed_dim}) must be divisible by heads ({self.heads})",
            )
        if self.window % 2:
            raise ConfigError(f"window must be even, got {self.window}")

    @property
    def shared_channels(self) -> int:
        """Channels of one shared-encoder feature map."""
        return self.base_channels * self.enc_layers

    @property
    def shift(self) -> int:
        """Cyclic shift applied on even-indexed branch layers."""
        return self.window // 2

    @property
    def odd_layers(self) -> list[int]:
        """1-based indices of the layers that carry a cross-attention site."""
        return list(range(1, self.branch_layers + 1, 2))

    def as_tuple(self) -> tuple[int, int, int, int, int, int, float]:
        """Field values in declaration order (checkpoint layout)."""
        return astuple(self)  # type: ignore[return-value]
