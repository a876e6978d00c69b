"""Tests for the EI, AG, SCD and VIF metrics."""

import math
import os
import sys

import numpy as np
import pytest

# Add the root directory to the path for direct imports
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "../..")))

from gifnet.errors import MetricError
from gifnet.metrics import metric_ag, metric_ei, metric_scd, metric_vif
from gifnet.metrics.quality import as_plane, pearson, sobel_magnitude, vif_single


def _textured(rng, size=48):
    from scipy import ndimage

    return ndimage.gaussian_filter(rng.random((size, size)), 1.0)


def test_as_plane_scales_and_reduces_rgb():
    """Test conversion to the 0-255 luma plane."""
    gray = np.full((4, 4, 3), 0.5)
    np.testing.assert_allclose(as_plane(gray), 127.5, atol=1e-3)
    with pytest.raises(MetricError):
        as_plane(np.zeros((4, 4, 2)))


def test_ag_constant_and_ramp():
    """Test AG closed forms."""
    assert metric_ag(np.full((8, 8), 0.3)) == 0.0
    step = 6.0
    ramp = np.tile((np.arange(10) * step / 255.0)[:, None], (1, 10))
    assert metric_ag(ramp) == pytest.approx(step / math.sqrt(2))


def test_ag_impulse():
    """Test AG on a 3x3 impulse by direct evaluation."""
    img = np.zeros((3, 3))
    img[1, 1] = 1.0
    expected = (2 * 255 / math.sqrt(2) + 255) / 4
    assert metric_ag(img) == pytest.approx(expected)


def test_ei_constant_and_offset(rng):
    """Test that EI is zero for flat images and ignores intensity offsets."""
    assert metric_ei(np.full((8, 8), 0.7)) == 0.0
    img = rng.random((12, 12)) * 0.5
    assert metric_ei(img + 0.3) == pytest.approx(metric_ei(img))


def test_ei_step_edge():
    """Test the Sobel response of a unit step edge."""
    img = np.zeros((5, 6))
    img[:, 3:] = 1.0
    magnitude = sobel_magnitude(img)
    np.testing.assert_allclose(magnitude[:, 2], 1020.0)
    np.testing.assert_allclose(magnitude[:, 3], 1020.0)
    np.testing.assert_allclose(magnitude[:, [0, 1, 4, 5]], 0.0)
    assert metric_ei(img) == pytest.approx(2 * 1020.0 / 6)


def test_pearson_zero_variance():
    """Test the zero-variance rule."""
    assert pearson(np.ones((4, 4)), np.arange(16.0).reshape(4, 4)) == 0.0


def test_scd_closed_forms(rng):
    """Test SCD on perfect and degenerate fusions."""
    a = rng.random((8, 8))
    b = rng.random((8, 8))
    assert metric_scd(a + b, a, b) == pytest.approx(2.0)
    assert metric_scd(a, a, a) == 0.0


def test_scd_matches_direct_correlation(rng):
    """Test SCD against numpy's correlation coefficients."""
    f, a, b = rng.random((3, 8, 8))
    expected = (
        np.corrcoef((f - b).ravel(), a.ravel())[0, 1]
        + np.corrcoef((f - a).ravel(), b.ravel())[0, 1]
    )
    assert metric_scd(f, a, b) == pytest.approx(expected)
    assert metric_scd(f, a, b) == pytest.approx(metric_scd(f, b, a))


def test_scd_size_mismatch():
    """Test that sources must match the fused size."""
    with pytest.raises(MetricError):
        metric_scd(np.zeros((8, 8)), np.zeros((8, 8)), np.zeros((8, 9)))


def test_vif_identity(rng):
    """Test that an image carries full information about itself."""
    x = _textured(rng)
    assert vif_single(x, x) == pytest.approx(1.0, abs=1e-9)
    assert metric_vif(x, x, x) == pytest.approx(1.0, abs=1e-9)


def test_vif_constant_fusion_transfers_nothing(rng):
    """Test that a flat fused image scores near zero."""
    a, b = _textured(rng), _textured(rng)
    assert metric_vif(np.full_like(a, 0.5), a, b) == pytest.approx(0.0, abs=1e-6)


def test_vif_drops_with_blur(rng):
    """Test that blurring lowers fidelity."""
    from scipy import ndimage

    x = _textured(rng, 64)
    assert vif_single(x, ndimage.gaussian_filter(x, 2.0)) < vif_single(x, ndimage.gaussian_filter(x, 0.5)) < 1.0


def test_vif_rejects_small_images():
    """Test the minimum size for the coarsest VIF window."""
    with pytest.raises(MetricError, match="too small"):
        vif_single(np.zeros((32, 32)), np.zeros((32, 32)))
    with pytest.raises(MetricError):
        vif_single(np.zeros((48, 48)), np.zeros((48, 40)))


def test_metrics_are_non_negative(rng):
    """Test EI and AG signs on random images."""
    img = rng.random((16, 16))
    assert metric_ei(img) > 0.0
    assert metric_ag(img) > 0.0


def test_vif_flat_sources_score_zero(rng):
    """Test that flat sources carry no information, so any fused image scores 0."""
    flat = np.full((48, 48), 0.5)
    noise = rng.random((48, 48))
    assert vif_single(flat, noise) == 0.0
    assert metric_vif(noise, flat, flat) == 0.0
    assert metric_vif(flat, flat, flat) == 0.0


def _reference_vif(ref, dist, sigma_nsq=2.0, eps=1e-10):
    """Straight four-scale pixel VIF built on sliding windows."""
    from numpy.lib.stride_tricks import sliding_window_view

    def gaussian_mean(img, n):
        ax = np.arange(n) - (n - 1) / 2.0
        k = np.exp(-(ax**2) / (2.0 * (n / 5.0) ** 2))
        win = np.outer(k, k)
        win /= win.sum()
        return np.einsum("ijkl,kl->ij", sliding_window_view(img, (n, n)), win)

    num = den = 0.0
    for scale in range(1, 5):
        n = 2 ** (5 - scale) + 1
        if scale > 1:
            ref = gaussian_mean(ref, n)[::2, ::2]
            dist = gaussian_mean(dist, n)[::2, ::2]
        mu1, mu2 = gaussian_mean(ref, n), gaussian_mean(dist, n)
        s1 = np.maximum(gaussian_mean(ref * ref, n) - mu1 * mu1, 0.0)
        s2 = np.maximum(gaussian_mean(dist * dist, n) - mu2 * mu2, 0.0)
        s12 = gaussian_mean(ref * dist, n) - mu1 * mu2

        g = s12 / (s1 + eps)
        sv = s2 - g * s12
        flat_ref, flat_dist = s1 < eps, s2 < eps
        g = np.where(flat_ref, 0.0, g)
        sv = np.where(flat_ref, s2, sv)
        s1 = np.where(flat_ref, 0.0, s1)
        g = np.where(flat_dist, 0.0, g)
        sv = np.where(flat_dist, 0.0, sv)
        sv = np.where(g < 0, s2, sv)
        g = np.maximum(g, 0.0)
        sv = np.maximum(sv, eps)

        num += np.sum(np.log10(1 + g * g * s1 / (sv + sigma_nsq)))
        den += np.sum(np.log10(1 + s1 / sigma_nsq))
    return num / den


def test_vif_matches_reference_implementation():
    """Test VIF against an independent sliding-window computation on a fixed scene."""
    from scipy import ndimage

    from gifnet.data import synthetic_scene

    vis, ir = synthetic_scene(64, np.random.default_rng(0))
    fused = ndimage.gaussian_filter(0.5 * as_plane(vis) / 255.0 + 0.5 * ir[:, :, 0], 0.8)

    for src in (vis, ir):
        expected = _reference_vif(as_plane(src), as_plane(fused))
        assert expected > 0.0
        assert vif_single(src, fused) == pytest.approx(expected, abs=1e-6)

    both = (_reference_vif(as_plane(vis), as_plane(fused)) + _reference_vif(as_plane(ir), as_plane(fused))) / 2
    assert metric_vif(fused, vis, ir) == pytest.approx(both, abs=1e-6)
