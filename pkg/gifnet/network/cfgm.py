"""Cross-fusion gating layers and the two task branches.

Each branch is a stack of transformer layers over the projected pair of
shared features. Odd (1-based) layers of the main branch also read the
auxiliary branch's running features through gated cross-attention.
"""

from enum import Enum

import torch
from torch import nn

from gifnet.errors import ConfigError, ShapeMismatchError
from gifnet.network.arch import ArchConfig
from gifnet.network.attention import (
    WindowCrossAttention,
    WindowSelfAttention,
    shifted_window_mask,
    window_partition,
    window_reverse,
)

# Initial value of every per-layer gate
LAMBDA_INIT = 0.1


class Branch(str, Enum):
    """Task branches: multi-modal (MM) and digital-photography (DP)."""

    MM = "mm"
    DP = "dp"

    @property
    def other(self) -> "Branch":
        """The opposite branch."""
        return Branch.DP if self is Branch.MM else Branch.MM


class Interaction(str, Enum):
    """How the auxiliary stream enters the main branch on odd layers."""

    CFGM = "cfgm"
    ADD = "add"
    NONE = "none"

    @classmethod
    def parse(cls, value: "str | Interaction") -> "Interaction":
        """Parse an interaction mode name.

        Raises:
            ConfigError: If the name is unknown
        """
        try:
            return cls(value)
        except ValueError as exc:
            choices = ", ".join(m.value for m in cls)
            raise ConfigError(
                f"Unknown interaction '{value}'; expected one of: {choices}",
            ) from exc


class CFGMLayer(nn.Module):
    """One branch layer: shifted-window self-attention plus, on odd layers, gated cross-attention."""

    def __init__(self, arch: ArchConfig, index: int) -> None:
        """Initialize the layer.

        Args:
            arch: Architecture config
            index: 1-based position in the branch
        """
        super().__init__()
        dim = arch.embed_dim
        self.index = index
        self.window = arch.window
        self.shift = arch.shift if index % 2 == 0 else 0

        self.norm1 = nn.LayerNorm(dim)
        self.attn = WindowSelfAttention(dim, arch.heads, arch.window)
        self.norm2 = nn.LayerNorm(dim)
        hidden = int(dim * arch.mlp_ratio)
        self.mlp = nn.Sequential(nn.Linear(dim, hidden), nn.GELU(), nn.Linear(hidden, dim))

        self.has_cross = index % 2 == 1
        if self.has_cross:
            self.norm_query = nn.LayerNorm(dim)
            self.norm_context = nn.LayerNorm(dim)
            self.cross = WindowCrossAttention(dim, arch.heads)

    def self_attend(self, x: torch.Tensor) -> torch.Tensor:
        """Transformer block on (B, H, W, C) features."""
        _, h, w, c = x.shape
        shortcut = x
        y = self.norm1(x)
        mask = None
        if self.shift:
            y = torch.roll(y, shifts=(-self.shift, -self.shift), dims=(1, 2))
            mask = shifted_window_mask(h, w, self.window, self.shift, device=x.device)
        y = self.attn(window_partition(y, self.window), mask)
        y = window_reverse(y, self.window, h, w)
        if self.shift:
            y = torch.roll(y, shifts=(self.shift, self.shift), dims=(1, 2))
        x = shortcut + y
        return x + self.mlp(self.norm2(x))

    def cross_attend(self, x: torch.Tensor, context: torch.Tensor) -> torch.Tensor:
        """Non-shifted windowed cross-attention on (B, H, W, C) features."""
        _, h, w, _ = x.shape
        out = self.cross(
            window_partition(self.norm_query(x), self.window),
            window_partition(self.norm_context(context), self.window),
        )
        return window_reverse(out, self.window, h, w)

    def forward(
        self,
        x: torch.Tensor,
        aux: torch.Tensor | None = None,
        gate: torch.Tensor | None = None,
        interaction: Interaction = Interaction.CFGM,
    ) -> torch.Tensor:
        """Run the layer on (B, H, W, C) features.

        Args:
            x: Main-branch features
            aux: Auxiliary features at the same layer, or None for self-only
            gate: Scalar gate for the cross-attention term
            interaction: How ``aux`` is injected on odd layers

        Returns:
            Updated main-branch features
        """
        x_hat = self.self_attend(x)
        if not self.has_cross or aux is None or interaction is Interaction.NONE:
            return x_hat
        if interaction is Interaction.ADD:
            return x_hat + aux
        return x_hat + gate * self.cross_attend(x_hat, aux)


class TaskBranch(nn.Module):
    """Projection of the shared pair followed by the branch's layer stack."""

    def __init__(self, arch: ArchConfig, branch: Branch) -> None:
        """Initialize the branch."""
        super().__init__()
        self.branch = branch
        self.window = arch.window
        self.proj_in = nn.Conv2d(2 * arch.shared_channels, arch.embed_dim, kernel_size=1)
        self.layers = nn.ModuleList(
            CFGMLayer(arch, i) for i in range(1, arch.branch_layers + 1)
        )
        self.gates = nn.ParameterList(
            nn.Parameter(torch.tensor(LAMBDA_INIT)) for _ in arch.odd_layers
        )

    def embed(self, shared_pair: torch.Tensor) -> torch.Tensor:
        """Project (B, 2S, H, W) shared features to (B, H, W, C) tokens.

        Raises:
            ShapeMismatchError: If H or W is not a multiple of the window
        """
        h, w = shared_pair.shape[-2:]
        if h % self.window or w % self.window:
            raise ShapeMismatchError(
                f"Branch input {h}x{w} is not a multiple of window {self.window}; "
                "pad the image first",
            )
        return self.proj_in(shared_pair).permute(0, 2, 3, 1)

    def gate(self, layer_index: int) -> torch.Tensor | None:
        """Gate parameter of 1-based layer ``layer_index`` (None on even layers)."""
        if layer_index % 2 == 0:
            return None
        return self.gates[(layer_index - 1) // 2]

    def self_stream(self, shared_pair: torch.Tensor) -> list[torch.Tensor]:
        """Run the branch self-attention only; returns the output of every layer."""
        x = self.embed(shared_pair)
        outputs = []
        for layer in self.layers:
            x = layer(x)
            outputs.append(x)
        return outputs

    def forward(
        self,
        shared_pair: torch.Tensor,
        aux_stream: list[torch.Tensor] | None = None,
        interaction: Interaction = Interaction.CFGM,
    ) -> torch.Tensor:
        """Run the branch as the main stream.

        Args:
            shared_pair: (B, 2S, H, W) shared features
            aux_stream: Per-layer outputs of the other branch, or None
            interaction: How the auxiliary stream is injected

        Returns:
            (B, C, H, W) branch features
        """
        if aux_stream is not None and len(aux_stream) != len(self.layers):
            raise ConfigError(
                f"Auxiliary stream has {len(aux_stream)} layers, expected {len(self.layers)}",
            )
        x = self.embed(shared_pair)
        for i, layer in enumerate(self.layers, start=1):
            aux = aux_stream[i - 1] if aux_stream is not None else None
            x = layer(x, aux, self.gate(i), interaction)
        return x.permute(0, 3, 1, 2)
