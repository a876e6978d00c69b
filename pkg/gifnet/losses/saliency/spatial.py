"""Default saliency scorer: spatial gradients of a fixed LoG response."""

import numpy as np
from scipy import ndimage

from gifnet.losses.saliency.base import ImageLike, SaliencyScorer
from gifnet.losses.saliency.registry import register_scorer

LOG_SIGMA = 1.0


def log_kernel(sigma: float = LOG_SIGMA) -> np.ndarray:
    """3x3 sampled Laplacian-of-Gaussian, shifted to zero sum."""
    y, x = np.mgrid[-1:2, -1:2].astype(np.float64)
    r2 = x**2 + y**2
    kernel = (r2 - 2 * sigma**2) / sigma**4 * np.exp(-r2 / (2 * sigma**2))
    return kernel - kernel.mean()


LOG_KERNEL = log_kernel()


@register_scorer
class SpatialGradScorer(SaliencyScorer):
    """Sum of absolute finite differences of the LoG-filtered image."""

    name = "spatial-grad"
    description = "spatial gradients of a fixed 3x3 Laplacian-of-Gaussian response"

    def response(self, plane: np.ndarray) -> np.ndarray:
        """LoG response of one (H, W) plane with edge replication."""
        return ndimage.correlate(plane, LOG_KERNEL, mode="nearest")

    def score(self, img: ImageLike) -> float:
        """Compute GradF; linear in the image and zero for constant input."""
        total = 0.0
        for plane in self._as_planes(img):
            phi = self.response(plane)
            total += float(np.abs(np.diff(phi, axis=0)).sum())
            total += float(np.abs(np.diff(phi, axis=1)).sum())
        return total
