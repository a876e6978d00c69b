"""RGB-focused joint dataset: synthesis, manifests and loading."""

from .builder import AugmentConfig, build_dataset
from .fixtures import make_synthetic_pairs, synthetic_scene
from .loader import JointCropDataset, JointSample, load_joint_sample
from .manifest import MANIFEST_NAME, DatasetManifest, ManifestEntry
from .synth import (
    DEFAULT_SIGMA,
    MaskKind,
    gaussian_blur,
    kernel_radius,
    make_mask,
    synth_multifocus_pair,
)

__all__ = [
    "DEFAULT_SIGMA",
    "MANIFEST_NAME",
    "AugmentConfig",
    "DatasetManifest",
    "JointCropDataset",
    "JointSample",
    "ManifestEntry",
    "MaskKind",
    "build_dataset",
    "gaussian_blur",
    "kernel_radius",
    "load_joint_sample",
    "make_mask",
    "make_synthetic_pairs",
    "synth_multifocus_pair",
    "synthetic_scene",
]
