"""Luminance/chrominance handling (ITU-R BT.601, full range).

Fusion runs on luma only; the chroma of an RGB source is split off before
fusion and reattached to the fused luma afterwards.
"""

import numpy as np
import numpy.typing as npt

from gifnet.errors import ShapeMismatchError
from gifnet.imaging.io import Image, as_image

Chroma = npt.NDArray[np.float32]

KR = 0.299
KB = 0.114
KG = 1.0 - KR - KB

# Rows give (Y, Cb - 0.5, Cr - 0.5) from (R, G, B)
_RGB_TO_YCBCR = np.array(
    [
        [KR, KG, KB],
        [-KR / (2.0 * (1.0 - KB)), -KG / (2.0 * (1.0 - KB)), 0.5],
        [0.5, -KG / (2.0 * (1.0 - KR)), -KB / (2.0 * (1.0 - KR))],
    ],
    dtype=np.float64,
)
_YCBCR_TO_RGB = np.linalg.inv(_RGB_TO_YCBCR)


def rgb_to_ycbcr(img: Image) -> tuple[Image, Chroma]:
    """Split an RGB image into luma and a (Cb, Cr) chroma plane.

    Args:
        img: 3-channel image

    Returns:
        Tuple of (luma as a 1-channel image, chroma of shape (H, W, 2)); an
        achromatic pixel has chroma (0.5, 0.5)

    Raises:
        ShapeMismatchError: If the image is not 3-channel
    """
    img = as_image(img)
    if img.shape[2] != 3:
        raise ShapeMismatchError(
            f"rgb_to_ycbcr expects 3 channels, got {img.shape[2]}",
        )
    ycc = img.astype(np.float64) @ _RGB_TO_YCBCR.T
    luma = np.clip(ycc[:, :, :1], 0.0, 1.0)
    chroma = ycc[:, :, 1:] + 0.5
    return luma.astype(np.float32), chroma.astype(np.float32)


def ycbcr_to_rgb(luma: Image, chroma: Chroma) -> Image:
    """Recombine luma and chroma into an RGB image clamped to [0, 1].

    Args:
        luma: 1-channel image
        chroma: (H, W, 2) plane holding Cb and Cr

    Returns:
        3-channel image

    Raises:
        ShapeMismatchError: If the spatial sizes disagree
    """
    luma = as_image(luma)
    chroma = np.asarray(chroma, dtype=np.float32)
    if chroma.ndim != 3 or chroma.shape[2] != 2:
        raise ShapeMismatchError(f"Chroma must be (H, W, 2), got {chroma.shape}")
    if luma.shape[:2] != chroma.shape[:2]:
        raise ShapeMismatchError(
            f"Luma {luma.shape[:2]} and chroma {chroma.shape[:2]} sizes differ",
        )
    ycc = np.concatenate(
        [luma[:, :, :1].astype(np.float64), chroma.astype(np.float64) - 0.5],
        axis=2,
    )
    rgb = ycc @ _YCBCR_TO_RGB.T
    return np.clip(rgb, 0.0, 1.0).astype(np.float32)


def to_luma(img: Image) -> Image:
    """Return the luma of an image; 1-channel input is returned as is."""
    img = as_image(img)
    if img.shape[2] == 1:
        return img
    return rgb_to_ycbcr(img)[0]
