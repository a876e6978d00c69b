"""Image I/O and color handling.

Rasters are float32 arrays of shape (H, W, C) in [0, 1] with C in {1, 3}.
"""

from .color import rgb_to_ycbcr, to_luma, ycbcr_to_rgb
from .io import (
    MIN_IMAGE_SIZE,
    Image,
    as_image,
    list_images,
    load_image,
    quantize,
    save_image,
    validate_image,
)

__all__ = [
    "MIN_IMAGE_SIZE",
    "Image",
    "as_image",
    "list_images",
    "load_image",
    "quantize",
    "rgb_to_ycbcr",
    "save_image",
    "to_luma",
    "validate_image",
    "ycbcr_to_rgb",
]
