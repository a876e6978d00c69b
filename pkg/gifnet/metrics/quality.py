"""Fusion quality metrics on the 0-255 luma scale.

EI and AG are no-reference clarity measures of one image; SCD and VIF
compare a fused image against both of its sources.
"""

import numpy as np
import numpy.typing as npt
from scipy import ndimage
from scipy.signal import convolve2d

from gifnet.errors import MetricError
from gifnet.imaging import to_luma

Plane = npt.NDArray[np.float64]

# Stabilizer and noise variance of the VIF information model
VIF_EPS = 1e-10
VIF_SIGMA_NSQ = 2.0
VIF_SCALES = 4


def as_plane(img: np.ndarray) -> Plane:
    """Luma of an image as a float64 (H, W) array on the 0-255 scale."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim == 3:
        if arr.shape[2] == 3:
            arr = to_luma(arr.astype(np.float32)).astype(np.float64)
        elif arr.shape[2] != 1:
            raise MetricError(f"Expected 1 or 3 channels, got {arr.shape[2]}")
        arr = arr[:, :, 0]
    if arr.ndim != 2:
        raise MetricError(f"Expected a 2-D image, got shape {arr.shape}")
    return arr * 255.0


def _same_size(*planes: Plane) -> None:
    shapes = {p.shape for p in planes}
    if len(shapes) != 1:
        raise MetricError(f"Image sizes differ: {sorted(shapes)}")


def metric_ag(img: np.ndarray) -> float:
    """Average gradient: mean of sqrt((dx^2 + dy^2) / 2) over forward differences."""
    p = as_plane(img)
    if min(p.shape) < 2:
        raise MetricError(f"AG needs at least 2x2 pixels, got {p.shape}")
    dx = p[:-1, 1:] - p[:-1, :-1]
    dy = p[1:, :-1] - p[:-1, :-1]
    return float(np.mean(np.sqrt((dx**2 + dy**2) / 2.0)))


def sobel_magnitude(img: np.ndarray) -> Plane:
    """Per-pixel 3x3 Sobel gradient magnitude with edge replication."""
    p = as_plane(img)
    sx = ndimage.sobel(p, axis=1, mode="nearest")
    sy = ndimage.sobel(p, axis=0, mode="nearest")
    return np.hypot(sx, sy)


def metric_ei(img: np.ndarray) -> float:
    """Edge intensity: mean Sobel gradient magnitude."""
    return float(np.mean(sobel_magnitude(img)))


def pearson(a: Plane, b: Plane) -> float:
    """Pearson correlation; 0 when either operand has zero variance."""
    da = a - a.mean()
    db = b - b.mean()
    denom = np.sqrt(np.sum(da * da) * np.sum(db * db))
    if denom == 0:
        return 0.0
    return float(np.sum(da * db) / denom)


def metric_scd(fused: np.ndarray, src_a: np.ndarray, src_b: np.ndarray) -> float:
    """Sum of correlation differences: r(F - B, A) + r(F - A, B)."""
    f, a, b = as_plane(fused), as_plane(src_a), as_plane(src_b)
    _same_size(f, a, b)
    return pearson(f - b, a) + pearson(f - a, b)


def _vif_window(n: int) -> Plane:
    sd = n / 5.0
    m = (n - 1) / 2.0
    y, x = np.ogrid[-m : m + 1, -m : m + 1]
    h = np.exp(-(x * x + y * y) / (2.0 * sd * sd))
    h[h < np.finfo(h.dtype).eps * h.max()] = 0
    return h / h.sum()


def _filter(img: Plane, win: Plane) -> Plane:
    return convolve2d(img, np.rot90(win, 2), mode="valid")


def vif_single(ref: np.ndarray, dist: np.ndarray) -> float:
    """Pixel-domain multi-scale VIF of ``dist`` relative to ``ref``.

    A reference with no variance at any scale carries no information, so
    the score is 0.0 whatever ``dist`` looks like.

    Raises:
        MetricError: If the sizes differ or the image is smaller than a
            scale's Gaussian window
    """
    ref_p, dist_p = as_plane(ref), as_plane(dist)
    _same_size(ref_p, dist_p)

    num = den = 0.0
    for scale in range(1, VIF_SCALES + 1):
        n = 2 ** (VIF_SCALES - scale + 1) + 1
        win = _vif_window(n)
        if scale > 1:
            ref_p = _filter(ref_p, win)[::2, ::2]
            dist_p = _filter(dist_p, win)[::2, ::2]
        if min(ref_p.shape) < n:
            raise MetricError(
                f"Image too small for VIF: {ref_p.shape} at scale {scale} "
                f"is below the {n}x{n} window",
            )

        mu1 = _filter(ref_p, win)
        mu2 = _filter(dist_p, win)
        sigma1_sq = _filter(ref_p * ref_p, win) - mu1 * mu1
        sigma2_sq = _filter(dist_p * dist_p, win) - mu2 * mu2
        sigma12 = _filter(ref_p * dist_p, win) - mu1 * mu2
        sigma1_sq[sigma1_sq < 0] = 0
        sigma2_sq[sigma2_sq < 0] = 0

        g = sigma12 / (sigma1_sq + VIF_EPS)
        sv_sq = sigma2_sq - g * sigma12

        flat_ref = sigma1_sq < VIF_EPS
        g[flat_ref] = 0
        sv_sq[flat_ref] = sigma2_sq[flat_ref]
        sigma1_sq[flat_ref] = 0

        flat_dist = sigma2_sq < VIF_EPS
        g[flat_dist] = 0
        sv_sq[flat_dist] = 0

        negative = g < 0
        sv_sq[negative] = sigma2_sq[negative]
        g[negative] = 0
        sv_sq[sv_sq <= VIF_EPS] = VIF_EPS

        num += np.sum(np.log10(1 + g * g * sigma1_sq / (sv_sq + VIF_SIGMA_NSQ)))
        den += np.sum(np.log10(1 + sigma1_sq / VIF_SIGMA_NSQ))

    return float(num / den) if den != 0 else 0.0


def metric_vif(fused: np.ndarray, src_a: np.ndarray, src_b: np.ndarray) -> float:
    """Mean of VIF(src_a -> fused) and VIF(src_b -> fused)."""
    return (vif_single(src_a, fused) + vif_single(src_b, fused)) / 2.0
