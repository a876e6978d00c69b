"""Deterministic synthetic visible/infrared scenes.

Used to exercise the pipeline without a real benchmark: the visible image has
colored texture and sharp geometric structure, the infrared image has warm
targets over a dim, smooth background.
"""

import logging
from pathlib import Path

import numpy as np
from scipy import ndimage

from gifnet.errors import ConfigError
from gifnet.imaging import MIN_IMAGE_SIZE, Image, save_image

# Configure logging
logger = logging.getLogger(__name__)


def synthetic_scene(size: int, rng: np.random.Generator) -> tuple[Image, Image]:
    """Render one aligned (visible RGB, infrared) pair.

    Args:
        size: Side length in pixels
        rng: Random generator driving the scene layout

    Returns:
        Tuple of (visible, infrared) images
    """
    rows, cols = np.mgrid[:size, :size].astype(np.float64)

    texture = ndimage.gaussian_filter(rng.random((size, size, 3)), sigma=(1.5, 1.5, 0))
    texture = (texture - texture.min()) / max(np.ptp(texture), 1e-8)
    vis = 0.25 + 0.35 * texture

    for _ in range(rng.integers(2, 5)):
        h, w = rng.integers(size // 8, size // 3, size=2)
        top, left = rng.integers(0, size - h), rng.integers(0, size - w)
        vis[top : top + h, left : left + w] = rng.uniform(0.0, 1.0, size=3)

    period = rng.integers(3, 7)
    stripes = ((cols + rows * rng.integers(0, 2)) // period) % 2
    band = (rows > size * 0.7) & (rows < size * 0.85)
    vis[band] = 0.15 + 0.7 * stripes[band][:, None]

    ir = 0.2 + 0.15 * ndimage.gaussian_filter(rng.random((size, size)), sigma=4.0)
    for _ in range(rng.integers(1, 4)):
        cy, cx = rng.uniform(0, size, size=2)
        radius = rng.uniform(size / 16, size / 6)
        ir += 0.6 * np.exp(-((rows - cy) ** 2 + (cols - cx) ** 2) / (2 * radius**2))

    vis = np.clip(vis, 0.0, 1.0).astype(np.float32)
    ir = np.clip(ir, 0.0, 1.0).astype(np.float32)[:, :, None]
    return vis, ir


def make_synthetic_pairs(
    out_dir: str | Path,
    count: int,
    size: int = 64,
    seed: int = 0,
) -> tuple[Path, Path]:
    """Write ``count`` synthetic pairs as ``vis/NNNN.png`` and ``ir/NNNN.png``.

    Args:
        out_dir: Output directory
        count: Number of pairs
        size: Side length of each image
        seed: Seed for scene generation

    Returns:
        Tuple of (visible directory, infrared directory)

    Raises:
        ConfigError: If count or size is invalid
    """
    if count < 1:
        raise ConfigError(f"count must be >= 1, got {count}")
    if size < MIN_IMAGE_SIZE:
        raise ConfigError(f"size must be >= {MIN_IMAGE_SIZE}, got {size}")

    out_dir = Path(out_dir)
    vis_dir, ir_dir = out_dir / "vis", out_dir / "ir"
    rng = np.random.default_rng(seed)
    for index in range(count):
        vis, ir = synthetic_scene(size, rng)
        save_image(vis, vis_dir / f"{index:04d}.png")
        save_image(ir, ir_dir / f"{index:04d}.png")

    logger.info(f"Wrote {count} synthetic {size}x{size} pairs to {out_dir}")
    return vis_dir, ir_dir
