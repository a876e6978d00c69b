"""Tests for windowed attention."""

import os
import sys

import pytest
import torch

# Add the root directory to the path for direct imports
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "../..")))

from gifnet.errors import ShapeMismatchError
from gifnet.network.attention import (
    WindowCrossAttention,
    WindowSelfAttention,
    relative_position_index,
    shifted_window_mask,
    window_partition,
    window_reverse,
)


def test_partition_and_reverse():
    """Test that reversing a partition restores the map."""
    x = torch.arange(2 * 8 * 16 * 3, dtype=torch.float32).reshape(2, 8, 16, 3)
    windows = window_partition(x, 4)
    assert windows.shape == (2 * 2 * 4, 16, 3)
    torch.testing.assert_close(window_reverse(windows, 4, 8, 16), x)


def test_partition_requires_window_multiple():
    """Test the size check."""
    with pytest.raises(ShapeMismatchError):
        window_partition(torch.zeros(1, 10, 8, 1), 4)


def test_shifted_mask_structure():
    """Test that only windows straddling the roll boundary are masked."""
    mask = shifted_window_mask(16, 16, 8, 4)
    assert mask.shape == (4, 64, 64)
    assert mask.dtype == torch.bool
    assert not mask[0].any()
    assert mask[3].any()
    assert torch.equal(mask, mask.transpose(1, 2))
    assert not mask.diagonal(dim1=1, dim2=2).any()


def test_relative_position_index_range():
    """Test that bias indices cover the table."""
    idx = relative_position_index(4)
    assert idx.shape == (16, 16)
    assert int(idx.min()) == 0
    assert int(idx.max()) == (2 * 4 - 1) ** 2 - 1
    assert torch.equal(idx.diagonal(), torch.full((16,), idx[0, 0].item()))


def test_self_attention_shape():
    """Test that self-attention keeps the token layout."""
    attn = WindowSelfAttention(dim=8, heads=2, window=4)
    x = torch.randn(3, 16, 8)
    assert attn(x).shape == x.shape


def test_masked_tokens_do_not_interact():
    """Test that blocked tokens do not influence each other."""
    torch.manual_seed(0)
    attn = WindowSelfAttention(dim=8, heads=2, window=4)
    mask = torch.zeros(1, 16, 16, dtype=torch.bool)
    mask[0, :8, 8:] = True
    mask[0, 8:, :8] = True

    x = torch.randn(1, 16, 8)
    y = x.clone()
    y[0, 8:] = torch.randn(8, 8)

    out_x = attn(x, mask)
    out_y = attn(y, mask)
    torch.testing.assert_close(out_x[0, :8], out_y[0, :8])


def test_cross_attention_reads_context():
    """Test that cross-attention output depends on the context tokens."""
    torch.manual_seed(0)
    cross = WindowCrossAttention(dim=8, heads=2)
    query = torch.randn(2, 16, 8)
    out_a = cross(query, torch.randn(2, 16, 8))
    out_b = cross(query, torch.randn(2, 16, 8))
    assert out_a.shape == query.shape
    assert not torch.allclose(out_a, out_b)


def test_uniform_cross_attention_is_window_mean():
    """Test that equal logits average the context values."""
    torch.manual_seed(0)
    cross = WindowCrossAttention(dim=4, heads=1)
    with torch.no_grad():
        cross.q.weight.zero_()
        cross.q.bias.zero_()
    query = torch.randn(1, 9, 4)
    context = torch.randn(1, 9, 4)

    values = cross.kv(context)[..., 4:]
    expected = cross.proj(values.mean(dim=1, keepdim=True)).expand(1, 9, 4)
    torch.testing.assert_close(cross(query, context), expected)
