"""Build the RGB-focused joint dataset.

Each aligned (visible RGB, infrared) pair yields four files under the output
directory (``vis/``, ``ir/``, ``near/``, ``far/``) and one manifest entry. The
visible image doubles as the digital-photography ground truth.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from gifnet.data.manifest import DatasetManifest, ManifestEntry
from gifnet.data.synth import DEFAULT_SIGMA, MaskKind, make_mask, synth_multifocus_pair
from gifnet.errors import ConfigError, DatasetError
from gifnet.imaging import list_images, load_image, save_image

# Configure logging
logger = logging.getLogger(__name__)

SUBDIRS = ("vis", "ir", "near", "far")


@dataclass(frozen=True)
class AugmentConfig:
    """Settings for joint dataset generation."""

    seed: int = 0
    sigma: float = DEFAULT_SIGMA
    mask_kind: MaskKind = MaskKind.CENTERED_DISK
    workers: int = 1

    def __post_init__(self) -> None:
        """Validate the settings."""
        if not self.sigma > 0:
            raise ConfigError(f"sigma must be > 0, got {self.sigma}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        object.__setattr__(self, "mask_kind", MaskKind.parse(self.mask_kind))


def sample_seed(seed: int, index: int) -> int:
    """Derive the per-sample mask seed from the run seed and sample index."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def _build_one(
    index: int,
    sample_id: str,
    vis_path: Path,
    ir_path: Path,
    out_dir: Path,
    config: AugmentConfig,
) -> ManifestEntry:
    vis = load_image(vis_path)
    ir = load_image(ir_path)
    if vis.shape[:2] != ir.shape[:2]:
        raise DatasetError(
            f"Pair '{sample_id}' is not aligned: visible {vis.shape[:2]} "
            f"vs infrared {ir.shape[:2]}",
        )
    if vis.shape[2] != 3:
        raise DatasetError(f"Visible image '{sample_id}' must be RGB")

    height, width = vis.shape[:2]
    mask = make_mask(height, width, config.mask_kind, sample_seed(config.seed, index))
    near, far = synth_multifocus_pair(vis, mask, config.sigma)

    entry = ManifestEntry(
        id=sample_id,
        vis=f"vis/{sample_id}.png",
        ir=f"ir/{sample_id}.png",
        near=f"near/{sample_id}.png",
        far=f"far/{sample_id}.png",
    )
    save_image(vis, out_dir / entry.vis)
    save_image(ir, out_dir / entry.ir)
    save_image(near, out_dir / entry.near)
    save_image(far, out_dir / entry.far)
    logger.debug(f"Built sample {sample_id} ({height}x{width})")
    return entry


def build_dataset(
    src_vis_dir: str | Path,
    src_ir_dir: str | Path,
    out_dir: str | Path,
    config: AugmentConfig | None = None,
) -> DatasetManifest:
    """Generate near/far focus counterparts for every aligned pair.

    Args:
        src_vis_dir: Directory of visible RGB images
        src_ir_dir: Directory of same-named infrared images
        out_dir: Output root; receives the images and ``manifest.txt``
        config: Augmentation settings

    Returns:
        The written manifest

    Raises:
        DatasetError: For empty sources, unmatched names or unaligned pairs
    """
    config = config or AugmentConfig()
    out_dir = Path(out_dir)

    vis_files = list_images(src_vis_dir)
    ir_files = list_images(src_ir_dir)
    if not vis_files:
        raise DatasetError(f"No PNG/BMP images found in {src_vis_dir}")

    unmatched = sorted(set(vis_files) ^ set(ir_files))
    if unmatched:
        raise DatasetError(
            f"Visible and infrared directories do not pair up; unmatched: "
            f"{', '.join(unmatched[:5])}",
        )

    for sub in SUBDIRS:
        (out_dir / sub).mkdir(parents=True, exist_ok=True)

    ids = list(vis_files)
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        futures = [
            pool.submit(
                _build_one,
                index,
                sample_id,
                vis_files[sample_id],
                ir_files[sample_id],
                out_dir,
                config,
            )
            for index, sample_id in enumerate(ids)
        ]
        entries = [future.result() for future in futures]

    manifest = DatasetManifest(
        root=out_dir,
        entries=entries,
        seed=config.seed,
        blur_sigma=config.sigma,
        mask_kind=config.mask_kind,
    )
    path = manifest.write()
    logger.info(f"Built joint dataset with {len(entries)} samples at {path}")
    return manifest
