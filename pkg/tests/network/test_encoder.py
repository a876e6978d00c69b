"""Tests for the architecture config, shared encoder and decoders."""

import os
import sys

import pytest
import torch

# Add the root directory to the path for direct imports
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "../..")))

from gifnet.errors import ConfigError, ShapeMismatchError
from gifnet.network import ArchConfig
from gifnet.network.encoder import ConvDecoder, SharedEncoder


def test_arch_defaults():
    """Test the default sizes and derived properties."""
    arch = ArchConfig()
    assert arch.shared_channels == 48
    assert arch.shift == 4
    assert arch.odd_layers == [1, 3]
    assert arch.as_tuple() == (16, 3, 4, 32, 2, 8, 2.0)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"base_channels": 0},
        {"branch_layers": 3},
        {"embed_dim": 10, "heads": 3},
        {"window": 7},
        {"mlp_ratio": -1.0},
    ],
)
def test_arch_validation(kwargs):
    """Test that invalid architectures raise ConfigError."""
    with pytest.raises(ConfigError):
        ArchConfig(**kwargs)


def test_encoder_output_channels(tiny_arch):
    """Test that the encoder concatenates every block output."""
    encoder = SharedEncoder(tiny_arch)
    out = encoder(torch.rand(2, 1, 16, 12))
    assert out.shape == (2, tiny_arch.shared_channels, 16, 12)


def test_encoder_replicates_gray_input(tiny_arch):
    """Test that a 1-channel image encodes like its 3-channel replication."""
    torch.manual_seed(0)
    encoder = SharedEncoder(tiny_arch)
    gray = torch.rand(1, 1, 8, 8)
    torch.testing.assert_close(encoder(gray), encoder(gray.repeat(1, 3, 1, 1)))


def test_encoder_rejects_two_channels(tiny_arch):
    """Test the channel check."""
    with pytest.raises(ShapeMismatchError):
        SharedEncoder(tiny_arch)(torch.rand(1, 2, 8, 8))


def test_decoder_output_is_an_image():
    """Test that decoders emit one channel in [0, 1]."""
    decoder = ConvDecoder(in_channels=6, hidden=8)
    out = decoder(torch.randn(2, 6, 9, 9) * 10)
    assert out.shape == (2, 1, 9, 9)
    assert out.min() >= 0.0
    assert out.max() <= 1.0


def test_zeroed_decoder_emits_half_gray():
    """Test that a decoder with zero weights outputs sigmoid(0) everywhere."""
    decoder = ConvDecoder(in_channels=4, hidden=4)
    with torch.no_grad():
        for param in decoder.parameters():
            param.zero_()
    out = decoder(torch.randn(1, 4, 8, 8))
    torch.testing.assert_close(out, torch.full((1, 1, 8, 8), 0.5))


def test_dense_wiring(tiny_arch):
    """Test that the last block sees the first block's output."""
    torch.manual_seed(0)
    encoder = SharedEncoder(tiny_arch)
    base = tiny_arch.base_channels
    last = encoder.blocks[-1]
    assert last.conv.in_channels == 3 + base * (tiny_arch.enc_layers - 1)
    assert encoder.blocks[0].conv.in_channels == 3
