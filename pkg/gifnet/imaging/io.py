"""Image loading and saving.

Images are ``numpy`` float32 rasters of shape (height, width, channels) with
values in [0, 1] and 1 or 3 channels. Only 8-bit PNG and BMP files are read and
only 8-bit PNG is written.
"""

import logging
from pathlib import Path

import numpy as np
import numpy.typing as npt
from PIL import Image as PILImage
from PIL import UnidentifiedImageError

from gifnet.errors import (
    ImageFormatError,
    ImageNotFoundError,
    ImageWriteError,
    ShapeMismatchError,
)

# Configure logging
logger = logging.getLogger(__name__)

Image = npt.NDArray[np.float32]

MIN_IMAGE_SIZE = 8
SUPPORTED_FORMATS = ("PNG", "BMP")
SUPPORTED_SUFFIXES = (".png", ".bmp")

# PIL mode -> (mode to convert to, resulting channel count)
_MODE_CHANNELS = {
    "L": ("L", 1),
    "LA": ("L", 1),
    "RGB": ("RGB", 3),
    "RGBA": ("RGB", 3),
}


def as_image(data: npt.ArrayLike) -> Image:
    """Coerce an array to the (H, W, C) float32 image layout.

    Two-dimensional input gains a trailing channel axis. Values are not
    clamped, so out-of-range test rasters pass through unchanged.

    Args:
        data: Array of shape (H, W) or (H, W, C) with C in {1, 3}

    Returns:
        A float32 array of shape (H, W, C)

    Raises:
        ShapeMismatchError: If the array is not a 1- or 3-channel raster
    """
    arr = np.asarray(data, dtype=np.float32)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    if arr.ndim != 3 or arr.shape[2] not in (1, 3):
        raise ShapeMismatchError(
            f"Expected an (H, W) or (H, W, 1|3) raster, got shape {arr.shape}",
        )
    return arr


def validate_image(img: Image) -> None:
    """Check the Image invariants.

    Args:
        img: Raster to validate

    Raises:
        ImageFormatError: If values are non-finite, outside [0, 1] or the
            raster is smaller than the minimum size
    """
    height, width = img.shape[:2]
    if height < MIN_IMAGE_SIZE or width < MIN_IMAGE_SIZE:
        raise ImageFormatError(
            f"Image is {height}x{width}; minimum size is "
            f"{MIN_IMAGE_SIZE}x{MIN_IMAGE_SIZE}",
        )
    if not np.all(np.isfinite(img)):
        raise ImageFormatError("Image contains non-finite values")
    if img.min() < 0.0 or img.max() > 1.0:
        raise ImageFormatError("Image values must lie within [0, 1]")


def load_image(path: str | Path) -> Image:
    """Load an 8-bit grayscale or RGB PNG/BMP file.

    Args:
        path: File to read

    Returns:
        The image scaled into [0, 1]; alpha channels are dropped

    Raises:
        ImageNotFoundError: If the file does not exist
        ImageFormatError: For unsupported formats, modes or undersized images
    """
    path = Path(path)
    if not path.is_file():
        raise ImageNotFoundError(f"No such image file: {path}")

    try:
        with PILImage.open(path) as pil:
            if pil.format not in SUPPORTED_FORMATS:
                raise ImageFormatError(
                    f"Unsupported image format {pil.format} for {path}; "
                    f"expected one of {', '.join(SUPPORTED_FORMATS)}",
                )
            if pil.mode not in _MODE_CHANNELS:
                raise ImageFormatError(
                    f"Unsupported pixel mode {pil.mode} for {path}; "
                    "expected 8-bit grayscale or RGB",
                )
            target_mode, channels = _MODE_CHANNELS[pil.mode]
            pixels = np.asarray(pil.convert(target_mode), dtype=np.uint8)
    except UnidentifiedImageError as e:
        raise ImageFormatError(f"Cannot decode image {path}: {e}") from e

    img = pixels.astype(np.float32).reshape(pixels.shape[0], pixels.shape[1], channels)
    img /= 255.0
    validate_image(img)
    logger.debug(f"Loaded {path} ({img.shape[0]}x{img.shape[1]}x{channels})")
    return img


def quantize(img: Image) -> npt.NDArray[np.uint8]:
    """Clamp to [0, 1] and quantize with round-half-up to 8-bit.

    Args:
        img: Raster of any float values

    Returns:
        uint8 array with the same shape
    """
    clamped = np.clip(np.asarray(img, dtype=np.float64), 0.0, 1.0)
    return np.floor(clamped * 255.0 + 0.5).astype(np.uint8)


def save_image(img: Image, path: str | Path) -> None:
    """Write an image as an 8-bit PNG.

    Values are clamped to [0, 1] before quantization. Parent directories are
    created as needed.

    Args:
        img: Raster to write (1 or 3 channels)
        path: Destination file

    Raises:
        ImageWriteError: If the destination cannot be written
    """
    img = as_image(img)
    pixels = quantize(img)
    if pixels.shape[2] == 1:
        pil = PILImage.fromarray(pixels[:, :, 0])
    else:
        pil = PILImage.fromarray(pixels)

    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        pil.save(path, format="PNG")
    except OSError as e:
        raise ImageWriteError(f"Cannot write image to {path}: {e}") from e
    logger.debug(f"Saved {path}")


def list_images(directory: str | Path) -> dict[str, Path]:
    """Map file stems to paths for the PNG/BMP files of a directory.

    Args:
        directory: Directory to scan (not recursive)

    Returns:
        Dictionary of stem -> path, in sorted stem order
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise ImageNotFoundError(f"No such image directory: {directory}")
    found = {
        p.stem: p
        for p in sorted(directory.iterdir())
        if p.is_file() and p.suffix.lower() in SUPPORTED_SUFFIXES
    }
    return dict(sorted(found.items()))
