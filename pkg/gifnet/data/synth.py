"""Synthetic multi-focus pairs from clear RGB images.

A near-focus image keeps the original pixels where the mask is 1 and is
blurred elsewhere; the far-focus image is the complement.
"""

import math
from enum import Enum

import numpy as np
import numpy.typing as npt
from scipy import ndimage

from gifnet.errors import ConfigError, ShapeMismatchError
from gifnet.imaging import Image, as_image

Mask = npt.NDArray[np.uint8]

DEFAULT_SIGMA = 3.0
DISK_RADIUS_RANGE = (0.2, 0.4)


class MaskKind(str, Enum):
    """Focus region families."""

    LEFT_HALF = "left-half"
    TOP_HALF = "top-half"
    CENTERED_DISK = "centered-disk"

    @classmethod
    def parse(cls, value: "str | MaskKind") -> "MaskKind":
        """Parse a mask kind name.

        Raises:
            ConfigError: If the name is not a known mask kind
        """
        try:
            return cls(value)
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise ConfigError(
                f"Unknown mask kind '{value}'; expected one of {choices}",
            ) from None


def kernel_radius(sigma: float) -> int:
    """Radius of the truncated Gaussian kernel used for blurring."""
    return int(math.ceil(3.0 * sigma))


def gaussian_blur(img: Image, sigma: float) -> Image:
    """Blur each channel with a truncated Gaussian and edge-replicate padding.

    Args:
        img: Image to blur
        sigma: Standard deviation in pixels, > 0

    Returns:
        Blurred image of the same shape

    Raises:
        ConfigError: If sigma is not positive
    """
    if not sigma > 0:
        raise ConfigError(f"Blur sigma must be > 0, got {sigma}")
    img = as_image(img)
    radius = kernel_radius(sigma)
    blurred = ndimage.gaussian_filter(
        img.astype(np.float64),
        sigma=(sigma, sigma, 0.0),
        mode="nearest",
        truncate=radius / sigma,
    )
    return blurred.astype(np.float32)


def make_mask(
    height: int,
    width: int,
    kind: str | MaskKind,
    seed: int,
) -> Mask:
    """Build a binary focus mask.

    Args:
        height: Mask height
        width: Mask width
        kind: One of left-half, top-half, centered-disk
        seed: Seed for the disk radius draw

    Returns:
        uint8 array of shape (height, width) holding 0/1
    """
    kind = MaskKind.parse(kind)
    mask = np.zeros((height, width), dtype=np.uint8)

    if kind is MaskKind.LEFT_HALF:
        mask[:, : width // 2] = 1
    elif kind is MaskKind.TOP_HALF:
        mask[: height // 2, :] = 1
    else:
        rng = np.random.default_rng(seed)
        low, high = DISK_RADIUS_RANGE
        radius = rng.uniform(low, high) * min(height, width)
        rows, cols = np.ogrid[:height, :width]
        cy, cx = (height - 1) / 2.0, (width - 1) / 2.0
        mask[(rows - cy) ** 2 + (cols - cx) ** 2 <= radius**2] = 1

    return mask


def synth_multifocus_pair(
    vis: Image,
    mask: Mask,
    sigma: float = DEFAULT_SIGMA,
) -> tuple[Image, Image]:
    """Create complementary near/far focus images from a clear image.

    Args:
        vis: Clear source image
        mask: Binary plane; 1 marks the near-focus (sharp) region
        sigma: Blur strength

    Returns:
        Tuple of (near, far)

    Raises:
        ShapeMismatchError: If the mask size differs from the image size
        ConfigError: If sigma is not positive
    """
    vis = as_image(vis)
    mask = np.asarray(mask)
    if mask.shape != vis.shape[:2]:
        raise ShapeMismatchError(
            f"Mask shape {mask.shape} does not match image {vis.shape[:2]}",
        )
    blurred = gaussian_blur(vis, sigma)
    sharp = mask.astype(bool)[:, :, None]
    near = np.where(sharp, vis, blurred)
    far = np.where(sharp, blurred, vis)
    return near.astype(np.float32), far.astype(np.float32)
