"""Joint samples and the seeded crop dataset used for training."""

import logging
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np
import torch
from torch.utils.data import Dataset

from gifnet.data.manifest import DatasetManifest, ManifestEntry
from gifnet.errors import DatasetError
from gifnet.imaging import Image, load_image, to_luma

# Configure logging
logger = logging.getLogger(__name__)

# Luma planes handed to the trainer, in a fixed order
PLANES = ("vis", "ir", "near", "far", "gt")

# Decoded entries kept in memory per dataset (least recently used evicted)
DEFAULT_CACHE_SIZE = 64


@dataclass
class JointSample:
    """Aligned visible, infrared, near/far focus images and RGB ground truth."""

    id: str
    vis: Image
    ir: Image
    near_focus: Image
    far_focus: Image
    gt: Image

    def __post_init__(self) -> None:
        """Check that all five images share one spatial size."""
        size = self.vis.shape[:2]
        for name in ("ir", "near_focus", "far_focus", "gt"):
            if getattr(self, name).shape[:2] != size:
                raise DatasetError(
                    f"Sample '{self.id}': {name} size "
                    f"{getattr(self, name).shape[:2]} differs from vis {size}",
                )

    def luma_planes(self) -> dict[str, Image]:
        """Luma of every image, keyed by plane name."""
        return {
            "vis": to_luma(self.vis),
            "ir": to_luma(self.ir),
            "near": to_luma(self.near_focus),
            "far": to_luma(self.far_focus),
            "gt": to_luma(self.gt),
        }


def load_joint_sample(manifest: DatasetManifest, entry: ManifestEntry) -> JointSample:
    """Load the images of one manifest entry; ground truth is the visible image."""
    vis = load_image(manifest.resolve(entry.vis))
    return JointSample(
        id=entry.id,
        vis=vis,
        ir=load_image(manifest.resolve(entry.ir)),
        near_focus=load_image(manifest.resolve(entry.near)),
        far_focus=load_image(manifest.resolve(entry.far)),
        gt=vis,
    )


def crop_origin(
    height: int,
    width: int,
    crop: int,
    seed: int,
    index: int,
) -> tuple[int, int]:
    """Seeded top-left corner of the crop drawn for item ``index``."""
    rng = np.random.default_rng([seed, index])
    top = int(rng.integers(0, height - crop + 1))
    left = int(rng.integers(0, width - crop + 1))
    return top, left


class JointCropDataset(Dataset):
    """Map-style dataset yielding one cropped luma stack per training item.

    Item ``i`` reads manifest entry ``i mod len(manifest)`` and crops every
    plane at the same seeded coordinates, so the stream is identical whatever
    the number of loader workers.
    """

    def __init__(
        self,
        manifest: DatasetManifest,
        crop: int,
        seed: int,
        length: int,
        cache_size: int = DEFAULT_CACHE_SIZE,
    ) -> None:
        """Initialize the dataset.

        Args:
            manifest: Joint dataset index
            crop: Square crop side
            seed: Run seed for crop placement
            length: Number of items to serve (steps x batch)
            cache_size: Most manifest entries kept decoded; 0 disables caching
        """
        if len(manifest) == 0:
            raise DatasetError("Manifest has no entries")
        self.manifest = manifest
        self.crop = crop
        self.seed = seed
        self.length = length
        self.cache_size = cache_size
        self._cache: OrderedDict[int, dict[str, Image]] = OrderedDict()

    def __len__(self) -> int:
        """Number of items served."""
        return self.length

    def _planes(self, entry_index: int) -> dict[str, Image]:
        if entry_index in self._cache:
            self._cache.move_to_end(entry_index)
            return self._cache[entry_index]
        entry = self.manifest.entries[entry_index]
        planes = load_joint_sample(self.manifest, entry).luma_planes()
        if self.cache_size > 0:
            self._cache[entry_index] = planes
            while len(self._cache) > self.cache_size:
                self._cache.popitem(last=False)
        return planes

    def __getitem__(self, index: int) -> dict[str, torch.Tensor]:
        """Return the cropped planes as (1, crop, crop) float32 tensors."""
        entry_index = index % len(self.manifest)
        planes = self._planes(entry_index)
        height, width = planes["vis"].shape[:2]
        if height < self.crop or width < self.crop:
            raise DatasetError(
                f"Sample '{self.manifest.entries[entry_index].id}' is "
                f"{height}x{width}, smaller than crop {self.crop}",
            )
        top, left = crop_origin(height, width, self.crop, self.seed, index)
        return {
            name: torch.from_numpy(
                np.ascontiguousarray(
                    planes[name][top : top + self.crop, left : left + self.crop, 0],
                ),
            ).unsqueeze(0)
            for name in PLANES
        }
