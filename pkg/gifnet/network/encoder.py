"""Convolutional parts: the dense shared encoder and the image decoders."""

import torch
from torch import nn

from gifnet.errors import ShapeMismatchError
from gifnet.network.arch import ENCODER_IN_CHANNELS, ArchConfig


class ConvLayer(nn.Module):
    """Reflection-padded 3x3 convolution followed by an activation."""

    def __init__(
        self,
        in_channels: int,
        out_channels: int,
        activation: nn.Module | None = None,
    ) -> None:
        """Initialize the layer.

        Args:
            in_channels: Input channels
            out_channels: Output channels
            activation: Activation module; ReLU when omitted
        """
        super().__init__()
        self.pad = nn.ReflectionPad2d(1)
        self.conv = nn.Conv2d(in_channels, out_channels, kernel_size=3)
        self.act = activation if activation is not None else nn.ReLU()

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        """Apply pad, convolution and activation."""
        return self.act(self.conv(self.pad(x)))


class SharedEncoder(nn.Module):
    """Densely connected encoder (S-Enc).

    Block ``i`` sees the raw input concatenated with the outputs of all
    earlier blocks; the encoder returns the concatenation of all block
    outputs, ``base_channels * enc_layers`` channels at full resolution.
    """

    def __init__(self, arch: ArchConfig) -> None:
        """Initialize the encoder from the architecture config."""
        super().__init__()
        base = arch.base_channels
        self.blocks = nn.ModuleList(
            ConvLayer(ENCODER_IN_CHANNELS + i * base, base)
            for i in range(arch.enc_layers)
        )

    def forward(self, img: torch.Tensor) -> torch.Tensor:
        """Encode a (B, 1|3, H, W) image batch.

        Raises:
            ShapeMismatchError: If the channel count is not 1 or 3
        """
        channels = img.shape[1]
        if channels == 1:
            img = img.expand(-1, ENCODER_IN_CHANNELS, -1, -1)
        elif channels != ENCODER_IN_CHANNELS:
            raise ShapeMismatchError(
                f"Encoder expects 1 or {ENCODER_IN_CHANNELS} channels, got {channels}",
            )

        outputs: list[torch.Tensor] = []
        for block in self.blocks:
            outputs.append(block(torch.cat([img, *outputs], dim=1)))
        return torch.cat(outputs, dim=1)


class ConvDecoder(nn.Module):
    """Three-layer conv stack squashing to a 1-channel image in [0, 1].

    Used both as the REC decoder (input: a pair of shared features) and as
    the global decoder G-Dec (input: branch features).
    """

    def __init__(self, in_channels: int, hidden: int) -> None:
        """Initialize the decoder.

        Args:
            in_channels: Input feature channels
            hidden: Width of the first hidden layer; the second is half of it
        """
        super().__init__()
        mid = max(hidden // 2, 1)
        self.layers = nn.Sequential(
            ConvLayer(in_channels, hidden),
            ConvLayer(hidden, mid),
            ConvLayer(mid, 1, activation=nn.Sigmoid()),
        )

    def forward(self, features: torch.Tensor) -> torch.Tensor:
        """Decode features to a (B, 1, H, W) image."""
        return self.layers(features)
