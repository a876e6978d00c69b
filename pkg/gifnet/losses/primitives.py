"""SSIM and MSE primitives on 1-channel torch images in [0, 1]."""

import torch
import torch.nn.functional as F

from gifnet.errors import ShapeMismatchError

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
C1 = 0.01**2
C2 = 0.03**2


def gaussian_window(
    size: int = SSIM_WINDOW,
    sigma: float = SSIM_SIGMA,
    dtype: torch.dtype = torch.float32,
    device: torch.device | None = None,
) -> torch.Tensor:
    """Normalized 2-D Gaussian kernel shaped (1, 1, size, size)."""
    coords = torch.arange(size, dtype=dtype, device=device) - (size - 1) / 2
    g = torch.exp(-(coords**2) / (2 * sigma**2))
    g = g / g.sum()
    return torch.outer(g, g)[None, None]


def _as_batch(x: torch.Tensor) -> torch.Tensor:
    """View (H, W), (1, H, W) or (B, 1, H, W) input as (B, 1, H, W)."""
    return x.reshape(-1, 1, *x.shape[-2:])


def _check_pair(x: torch.Tensor, y: torch.Tensor, min_size: int = 1) -> None:
    if x.shape != y.shape:
        raise ShapeMismatchError(
            f"Image shapes differ: {tuple(x.shape)} vs {tuple(y.shape)}",
        )
    if min(x.shape[-2:]) < min_size:
        raise ShapeMismatchError(
            f"Images must be at least {min_size}x{min_size}, got {tuple(x.shape[-2:])}",
        )


def ssim(x: torch.Tensor, y: torch.Tensor) -> torch.Tensor:
    """Single-scale SSIM averaged over valid window positions.

    Args:
        x: 1-channel image(s)
        y: Image(s) shaped like ``x``

    Returns:
        Scalar tensor in [-1, 1]

    Raises:
        ShapeMismatchError: If shapes differ or a side is below 11 pixels
    """
    _check_pair(x, y, SSIM_WINDOW)
    x, y = _as_batch(x), _as_batch(y)
    window = gaussian_window(dtype=x.dtype, device=x.device)

    mu_x = F.conv2d(x, window)
    mu_y = F.conv2d(y, window)
    sigma_xx = F.conv2d(x * x, window) - mu_x**2
    sigma_yy = F.conv2d(y * y, window) - mu_y**2
    sigma_xy = F.conv2d(x * y, window) - mu_x * mu_y

    numerator = (2 * mu_x * mu_y + C1) * (2 * sigma_xy + C2)
    denominator = (mu_x**2 + mu_y**2 + C1) * (sigma_xx + sigma_yy + C2)
    return (numerator / denominator).mean()


def loss_ssim(x: torch.Tensor, y: torch.Tensor) -> torch.Tensor:
    """1 - SSIM, floored at 0 against rounding."""
    return torch.clamp(1.0 - ssim(x, y), min=0.0)


def loss_mse(x: torch.Tensor, y: torch.Tensor) -> torch.Tensor:
    """Mean squared per-pixel difference."""
    _check_pair(x, y)
    return torch.mean((x - y) ** 2)
