"""Windowed multi-head self- and cross-attention."""

import torch
import torch.nn.functional as F
from torch import nn

from gifnet.errors import ShapeMismatchError


def window_partition(x: torch.Tensor, window: int) -> torch.Tensor:
    """Split (B, H, W, C) into (B * nW, window * window, C) token windows.

    Raises:
        ShapeMismatchError: If H or W is not a multiple of ``window``
    """
    b, h, w, c = x.shape
    if h % window or w % window:
        raise ShapeMismatchError(
            f"Feature map {h}x{w} is not a multiple of window {window}",
        )
    x = x.view(b, h // window, window, w // window, window, c)
    return x.permute(0, 1, 3, 2, 4, 5).reshape(-1, window * window, c)


def window_reverse(windows: torch.Tensor, window: int, h: int, w: int) -> torch.Tensor:
    """Inverse of :func:`window_partition`."""
    c = windows.shape[-1]
    b = windows.shape[0] // ((h // window) * (w // window))
    x = windows.view(b, h // window, w // window, window, window, c)
    return x.permute(0, 1, 3, 2, 4, 5).reshape(b, h, w, c)


def shifted_window_mask(
    h: int,
    w: int,
    window: int,
    shift: int,
    device: torch.device | None = None,
) -> torch.Tensor:
    """Boolean (nW, N, N) mask, True where two tokens must not attend.

    After a cyclic roll by ``-shift``, a window may hold pixels that were not
    adjacent in the unrolled map; those pairs are masked out.
    """
    region = torch.zeros(1, h, w, 1, device=device)
    slices = (slice(0, -window), slice(-window, -shift), slice(-shift, None))
    label = 0
    for hs in slices:
        for ws in slices:
            region[:, hs, ws, :] = label
            label += 1
    ids = window_partition(region, window).squeeze(-1)
    return ids.unsqueeze(1) != ids.unsqueeze(2)


def relative_position_index(window: int) -> torch.Tensor:
    """(N, N) index into a (2 * window - 1) ** 2 relative bias table."""
    coords = torch.stack(
        torch.meshgrid(torch.arange(window), torch.arange(window), indexing="ij"),
    ).flatten(1)
    rel = (coords[:, :, None] - coords[:, None, :]).permute(1, 2, 0)
    rel = rel + (window - 1)
    return rel[:, :, 0] * (2 * window - 1) + rel[:, :, 1]


class WindowSelfAttention(nn.Module):
    """Multi-head self-attention inside each window with a relative position bias."""

    def __init__(self, dim: int, heads: int, window: int) -> None:
        """Initialize the attention block.

        Args:
            dim: Token width
            heads: Number of heads
            window: Window side
        """
        super().__init__()
        self.heads = heads
        self.scale = (dim // heads) ** -0.5
        self.qkv = nn.Linear(dim, dim * 3)
        self.proj = nn.Linear(dim, dim)
        self.relative_position_bias_table = nn.Parameter(
            torch.zeros((2 * window - 1) ** 2, heads),
        )
        self.register_buffer(
            "relative_position_index",
            relative_position_index(window),
            persistent=False,
        )

    def forward(self, x: torch.Tensor, mask: torch.Tensor | None = None) -> torch.Tensor:
        """Attend within windows.

        Args:
            x: (B * nW, N, C) windowed tokens
            mask: Optional (nW, N, N) boolean mask, True where blocked

        Returns:
            Tensor shaped like ``x``
        """
        b_, n, c = x.shape
        qkv = self.qkv(x).reshape(b_, n, 3, self.heads, c // self.heads)
        q, k, v = qkv.permute(2, 0, 3, 1, 4)

        attn = (q * self.scale) @ k.transpose(-2, -1)
        bias = self.relative_position_bias_table[self.relative_position_index.view(-1)]
        attn = attn + bias.view(n, n, -1).permute(2, 0, 1).unsqueeze(0)

        if mask is not None:
            n_windows = mask.shape[0]
            attn = attn.view(b_ // n_windows, n_windows, self.heads, n, n)
            attn = attn.masked_fill(mask[None, :, None], float("-inf"))
            attn = attn.view(b_, self.heads, n, n)

        out = F.softmax(attn, dim=-1) @ v
        return self.proj(out.transpose(1, 2).reshape(b_, n, c))


class WindowCrossAttention(nn.Module):
    """Windowed attention with queries from one stream and keys/values from another."""

    def __init__(self, dim: int, heads: int) -> None:
        """Initialize the attention block."""
        super().__init__()
        self.heads = heads
        self.scale = (dim // heads) ** -0.5
        self.q = nn.Linear(dim, dim)
        self.kv = nn.Linear(dim, dim * 2)
        self.proj = nn.Linear(dim, dim)

    def forward(self, x_query: torch.Tensor, x_context: torch.Tensor) -> torch.Tensor:
        """Attend from ``x_query`` windows to the matching ``x_context`` windows.

        Args:
            x_query: (B * nW, N, C) query tokens
            x_context: (B * nW, N, C) key/value tokens

        Returns:
            Tensor shaped like ``x_query``
        """
        b_, n, c = x_query.shape
        d = c // self.heads
        q = self.q(x_query).reshape(b_, n, self.heads, d).transpose(1, 2)
        kv = self.kv(x_context).reshape(b_, n, 2, self.heads, d)
        k, v = kv.permute(2, 0, 3, 1, 4)

        attn = F.softmax((q * self.scale) @ k.transpose(-2, -1), dim=-1)
        out = attn @ v
        return self.proj(out.transpose(1, 2).reshape(b_, n, c))
