"""Tests for pair fusion, single-image enhancement and feature export."""

import os
import sys

import numpy as np
import pytest

# Add the root directory to the path for direct imports
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from gifnet.errors import ConfigError, ShapeMismatchError
from gifnet.fusion import (
    ColorSource,
    FusionRequest,
    enhance_single,
    export_feature_maps,
    fuse_pair,
    normalize_map,
)
from gifnet.imaging import list_images, rgb_to_ycbcr


@pytest.fixture
def pastel(rng):
    """Low-saturation RGB image whose chroma never clips."""
    base = rng.uniform(0.3, 0.7, size=(20, 24, 1))
    tint = rng.uniform(-0.02, 0.02, size=(20, 24, 3))
    return (base + tint).astype(np.float32)


def test_request_validation(rng):
    """Test the size and color checks of a request."""
    with pytest.raises(ShapeMismatchError):
        FusionRequest(rng.random((16, 16)), rng.random((16, 17)))
    with pytest.raises(ConfigError):
        FusionRequest(rng.random((16, 16)), rng.random((16, 16)), "c")
    req = FusionRequest(rng.random((16, 16)), rng.random((16, 16, 3)), "b")
    assert req.color_source is ColorSource.B
    assert req.chroma_donor.shape == (16, 16, 3)


def test_gray_donor_gives_gray_output(tiny_model, rng):
    """Test that a 1-channel donor yields a 1-channel fused image."""
    req = FusionRequest(rng.random((16, 16)), rng.random((16, 16, 3)), ColorSource.A)
    assert req.chroma_donor is None
    fused = fuse_pair(tiny_model, req)
    assert fused.shape == (16, 16, 1)


def test_fused_shape_and_range(tiny_model, pastel, rng):
    """Test that non-window sizes come back unpadded and in range."""
    fused = fuse_pair(tiny_model, FusionRequest(pastel, rng.random((20, 24)), ColorSource.A))
    assert fused.shape == (20, 24, 3)
    assert fused.dtype == np.float32
    assert fused.min() >= 0.0 and fused.max() <= 1.0


def test_chroma_is_reattached(tiny_model, pastel, rng):
    """Test that the RGB output carries the fused luma and the donor's chroma."""
    ir = rng.random((20, 24))
    gray = fuse_pair(tiny_model, FusionRequest(pastel, ir, ColorSource.NONE))
    color = fuse_pair(tiny_model, FusionRequest(pastel, ir, ColorSource.A))
    luma, chroma = rgb_to_ycbcr(color)

    # Pixels near black or white clip when chroma is reapplied
    inside = ((gray > 0.05) & (gray < 0.95))[:, :, 0]
    assert inside.any()
    np.testing.assert_allclose(luma[inside], gray[inside], atol=1e-4)
    np.testing.assert_allclose(chroma[inside], rgb_to_ycbcr(pastel)[1][inside], atol=1e-4)


def test_enhance_equals_self_fusion(tiny_model, pastel):
    """Test that enhancement is fusion of an image with itself."""
    enhanced = enhance_single(tiny_model, pastel)
    np.testing.assert_array_equal(enhanced, fuse_pair(tiny_model, FusionRequest(pastel, pastel)))
    np.testing.assert_array_equal(enhanced, enhance_single(tiny_model, pastel))
    assert enhanced.shape == pastel.shape


def test_inputs_smaller_than_window(tiny_model, rng):
    """Test that inputs below the window size are refused."""
    with pytest.raises(ShapeMismatchError):
        fuse_pair(tiny_model, FusionRequest(rng.random((6, 16)), rng.random((6, 16))))


def test_normalize_map():
    """Test min-max scaling of one feature channel."""
    channel = np.array([[1.0, 3.0], [5.0, 3.0]])
    np.testing.assert_allclose(normalize_map(channel)[:, :, 0], [[0.0, 0.5], [1.0, 0.5]])
    assert not normalize_map(np.full((2, 2), 7.0)).any()


def test_export_feature_maps(temp_directory, tiny_model, rng):
    """Test that each map writes the requested number of channels."""
    written = export_feature_maps(
        tiny_model,
        rng.random((16, 16)),
        rng.random((16, 16)),
        temp_directory,
        channels=2,
    )
    assert len(written) == 8
    assert set(list_images(temp_directory)) == {
        f"{name}_{c:02d}" for name in ("shared_a", "shared_b", "mm", "dp") for c in range(2)
    }
    with pytest.raises(ConfigError):
        export_feature_maps(tiny_model, rng.random((16, 16)), rng.random((16, 16)), temp_directory, 0)
