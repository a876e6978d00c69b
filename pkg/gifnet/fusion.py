"""File: fusion.py.

Inference: task-agnostic fusion of an aligned image pair and
single-image enhancement (the same image fed as both inputs).
"""

import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np
import torch

from gifnet.errors import ConfigError, ShapeMismatchError
from gifnet.imaging import (
    Image,
    as_image,
    rgb_to_ycbcr,
    save_image,
    to_luma,
    ycbcr_to_rgb,
)
from gifnet.network import GIFNet

# Configure logging
logger = logging.getLogger(__name__)


class ColorSource(str, Enum):
    """Which input donates chroma to the fused luma."""

    A = "a"
    B = "b"
    NONE = "none"


@dataclass
class FusionRequest:
    """An aligned pair to fuse and the chroma donor."""

    input_a: Image
    input_b: Image
    color_source: ColorSource = ColorSource.A

    def __post_init__(self) -> None:
        """Normalize the images and check that the sizes agree.

        Raises:
            ShapeMismatchError: If the two inputs differ in size
            ConfigError: If the color source is unknown
        """
        self.input_a = as_image(self.input_a)
        self.input_b = as_image(self.input_b)
        if self.input_a.shape[:2] != self.input_b.shape[:2]:
            raise ShapeMismatchError(
                f"Input sizes differ: {self.input_a.shape[:2]} vs {self.input_b.shape[:2]}",
            )
        try:
            self.color_source = ColorSource(self.color_source)
        except ValueError as exc:
            raise ConfigError(
                f"color_source must be one of a, b, none; got '{self.color_source}'",
            ) from exc

    @property
    def chroma_donor(self) -> Image | None:
        """The 3-channel input selected as chroma donor, if any."""
        if self.color_source is ColorSource.NONE:
            return None
        donor = self.input_a if self.color_source is ColorSource.A else self.input_b
        return donor if donor.shape[2] == 3 else None


def _luma_tensor(img: Image) -> torch.Tensor:
    return torch.from_numpy(np.ascontiguousarray(to_luma(img)[:, :, 0]))[None, None]


def fuse_pair(model: GIFNet, req: FusionRequest) -> Image:
    """Fuse ``req``'s pair with MM as the routed main branch.

    Args:
        model: Trained network
        req: The pair and chroma donor

    Returns:
        Fused image: RGB if the donor is 3-channel, otherwise 1-channel luma

    Raises:
        ShapeMismatchError: If the inputs are smaller than the attention window
    """
    window = model.arch.window
    if min(req.input_a.shape[:2]) < window:
        raise ShapeMismatchError(
            f"Inputs must be at least {window}x{window}, got {req.input_a.shape[:2]}",
        )

    with torch.no_grad():
        out = model.fuse(_luma_tensor(req.input_a), _luma_tensor(req.input_b))
    fused = out[0, 0].numpy().astype(np.float32)[:, :, None]

    donor = req.chroma_donor
    if donor is None:
        return fused
    _, chroma = rgb_to_ycbcr(donor)
    return ycbcr_to_rgb(fused, chroma)


def enhance_single(model: GIFNet, x: Image) -> Image:
    """Enhance one image by fusing it with itself."""
    return fuse_pair(model, FusionRequest(x, x, ColorSource.A))


def normalize_map(channel: np.ndarray) -> Image:
    """Min-max scale one feature channel to [0, 1]; constant maps become zeros."""
    lo, hi = float(channel.min()), float(channel.max())
    if hi <= lo:
        return np.zeros((*channel.shape, 1), dtype=np.float32)
    return ((channel - lo) / (hi - lo)).astype(np.float32)[:, :, None]


def export_feature_maps(
    model: GIFNet,
    input_a: Image,
    input_b: Image,
    out_dir: str | Path,
    channels: int = 4,
) -> list[Path]:
    """Save the first ``channels`` channels of every intermediate feature map.

    Files are named ``<map>_<channel>.png`` with maps ``shared_a``,
    ``shared_b``, ``mm`` and ``dp``.

    Raises:
        ConfigError: If ``channels`` is below 1
    """
    if channels < 1:
        raise ConfigError(f"channels must be >= 1, got {channels}")
    req = FusionRequest(input_a, input_b, ColorSource.NONE)
    maps = model.feature_maps(_luma_tensor(req.input_a), _luma_tensor(req.input_b))

    out_dir = Path(out_dir)
    written = []
    for name, tensor in maps.items():
        data = tensor[0].numpy()
        for c in range(min(channels, data.shape[0])):
            path = out_dir / f"{name}_{c:02d}.png"
            save_image(normalize_map(data[c]), path)
            written.append(path)
    logger.info(f"Wrote {len(written)} feature maps to {out_dir}")
    return written
