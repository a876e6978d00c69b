"""Pytest configuration file for gifnet tests."""

import os
import shutil
import sys
import tempfile

import numpy as np
import pytest

# Add the root directory to the path for direct imports
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from gifnet.data import AugmentConfig, build_dataset, make_synthetic_pairs
from gifnet.network import ArchConfig, build_model


@pytest.fixture
def temp_directory():
    """Create a temporary directory for testing."""
    temp_dir = tempfile.mkdtemp()
    yield temp_dir
    shutil.rmtree(temp_dir)


@pytest.fixture
def rng():
    """Seeded numpy generator."""
    return np.random.default_rng(1234)


@pytest.fixture
def tiny_arch():
    """A small architecture that trains in well under a second per step."""
    return ArchConfig(
        base_channels=4,
        enc_layers=2,
        branch_layers=2,
        embed_dim=8,
        heads=2,
        window=8,
        mlp_ratio=2.0,
    )


@pytest.fixture
def tiny_model(tiny_arch):
    """Freshly initialized model with the tiny architecture."""
    return build_model(tiny_arch, seed=0).eval()


@pytest.fixture
def synthetic_pairs(temp_directory):
    """Three 32x32 synthetic visible/infrared pairs on disk."""
    vis_dir, ir_dir = make_synthetic_pairs(
        os.path.join(temp_directory, "src"),
        count=3,
        size=32,
        seed=0,
    )
    return vis_dir, ir_dir


@pytest.fixture
def joint_manifest(temp_directory, synthetic_pairs):
    """Joint dataset built from the synthetic pairs."""
    vis_dir, ir_dir = synthetic_pairs
    return build_dataset(
        vis_dir,
        ir_dir,
        os.path.join(temp_directory, "joint"),
        AugmentConfig(seed=0, sigma=2.0),
    )
