"""Tests for building the joint dataset."""

import os
import sys
from pathlib import Path

import numpy as np
import pytest

# Add the root directory to the path for direct imports
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "../..")))

from gifnet.data import (
    MANIFEST_NAME,
    AugmentConfig,
    DatasetManifest,
    build_dataset,
    make_synthetic_pairs,
)
from gifnet.errors import ConfigError, DatasetError
from gifnet.imaging import load_image, save_image


def test_build_writes_all_planes(temp_directory, joint_manifest):
    """Test that every pair produces four files and a manifest entry."""
    root = Path(temp_directory) / "joint"
    assert (root / MANIFEST_NAME).is_file()
    assert [e.id for e in joint_manifest.entries] == ["0000", "0001", "0002"]
    for entry in joint_manifest.entries:
        for rel in (entry.vis, entry.ir, entry.near, entry.far):
            assert (root / rel).is_file()

    reread = DatasetManifest.read(root / MANIFEST_NAME)
    assert reread.entries == joint_manifest.entries
    assert reread.blur_sigma == 2.0


def test_build_is_deterministic(temp_directory, synthetic_pairs):
    """Test that the same seed yields identical near/far images."""
    vis_dir, ir_dir = synthetic_pairs
    config = AugmentConfig(seed=3, sigma=1.5)
    first = build_dataset(vis_dir, ir_dir, os.path.join(temp_directory, "a"), config)
    second = build_dataset(
        vis_dir,
        ir_dir,
        os.path.join(temp_directory, "b"),
        AugmentConfig(seed=3, sigma=1.5, workers=2),
    )
    for e1, e2 in zip(first.entries, second.entries, strict=True):
        np.testing.assert_array_equal(
            load_image(first.resolve(e1.near)),
            load_image(second.resolve(e2.near)),
        )


def test_near_or_far_keeps_each_visible_pixel(joint_manifest):
    """Test that every visible pixel is preserved in near or far."""
    entry = joint_manifest.entries[0]
    vis = load_image(joint_manifest.resolve(entry.vis))
    near = load_image(joint_manifest.resolve(entry.near))
    far = load_image(joint_manifest.resolve(entry.far))
    kept = (near == vis) | (far == vis)
    assert kept.all()


def test_build_rejects_empty_source(temp_directory):
    """Test that an empty visible directory is refused."""
    vis_dir = Path(temp_directory) / "vis"
    ir_dir = Path(temp_directory) / "ir"
    vis_dir.mkdir()
    ir_dir.mkdir()
    with pytest.raises(DatasetError, match="No PNG/BMP"):
        build_dataset(vis_dir, ir_dir, Path(temp_directory) / "out")


def test_build_rejects_unmatched_names(temp_directory):
    """Test that visible and infrared names must pair up."""
    vis_dir, ir_dir = make_synthetic_pairs(temp_directory, count=2, size=16)
    os.remove(ir_dir / "0001.png")
    with pytest.raises(DatasetError, match="unmatched"):
        build_dataset(vis_dir, ir_dir, Path(temp_directory) / "out")


def test_build_rejects_unaligned_pair(temp_directory):
    """Test that pairs of different sizes are refused."""
    vis_dir, ir_dir = make_synthetic_pairs(temp_directory, count=1, size=16)
    save_image(np.zeros((16, 20, 1), dtype=np.float32), ir_dir / "0000.png")
    with pytest.raises(DatasetError, match="not aligned"):
        build_dataset(vis_dir, ir_dir, Path(temp_directory) / "out")


def test_build_rejects_gray_visible(temp_directory):
    """Test that the visible source must be RGB."""
    vis_dir, ir_dir = make_synthetic_pairs(temp_directory, count=1, size=16)
    save_image(np.zeros((16, 16, 1), dtype=np.float32), vis_dir / "0000.png")
    with pytest.raises(DatasetError, match="RGB"):
        build_dataset(vis_dir, ir_dir, Path(temp_directory) / "out")


def test_augment_config_validation():
    """Test AugmentConfig checks."""
    with pytest.raises(ConfigError):
        AugmentConfig(sigma=0.0)
    with pytest.raises(ConfigError):
        AugmentConfig(workers=0)
    with pytest.raises(ConfigError):
        AugmentConfig(mask_kind="spiral")
    assert AugmentConfig(mask_kind="left-half").mask_kind.value == "left-half"


def test_make_synthetic_pairs_validation(temp_directory):
    """Test the synthetic pair generator checks."""
    with pytest.raises(ConfigError):
        make_synthetic_pairs(temp_directory, count=0)
    with pytest.raises(ConfigError):
        make_synthetic_pairs(temp_directory, count=1, size=4)
