"""Base class for saliency scorers.

A scorer reduces an image to one non-negative "information richness"
number (GradF). Two scores are turned into loss mixing weights.
"""

from abc import ABC, abstractmethod
from typing import ClassVar

import numpy as np
import torch

from gifnet.errors import SaliencyError

ImageLike = np.ndarray | torch.Tensor


class SaliencyScorer(ABC):
    """Base class for all saliency scorers.

    Each scorer must define:
    - name: The unique name used in configuration (``saliency = <name>``)
    - description: One line shown by ``--help`` and in error hints
    - score(): Method computing GradF for an image
    """

    name: ClassVar[str]
    description: ClassVar[str]

    def __init__(self) -> None:
        """Initialize the scorer.

        Validates that required class variables are defined.
        """
        if not getattr(self.__class__, "name", None):
            raise ValueError(
                f"{self.__class__.__name__} must define a 'name' class variable",
            )
        if not getattr(self.__class__, "description", None):
            raise ValueError(
                f"{self.__class__.__name__} must define a 'description' class variable",
            )

    @classmethod
    def from_options(cls, weights_path: str | None = None) -> "SaliencyScorer":
        """Build the scorer from configuration options it understands."""
        return cls()

    @abstractmethod
    def score(self, img: ImageLike) -> float:
        """Compute GradF for an image or a batch of 1-channel images.

        Args:
            img: (H, W), (H, W, 1) array or (B, 1, H, W) tensor

        Returns:
            Non-negative score
        """
        raise NotImplementedError("Subclasses must implement the score method")

    @staticmethod
    def _as_planes(img: ImageLike) -> np.ndarray:
        """Convert supported inputs to a float64 (N, H, W) stack."""
        if isinstance(img, torch.Tensor):
            arr = img.detach().cpu().double().numpy()
            if arr.ndim == 4:
                if arr.shape[1] != 1:
                    raise SaliencyError(f"Expected 1-channel batch, got {arr.shape}")
                arr = arr[:, 0]
        else:
            arr = np.asarray(img, dtype=np.float64)
            if arr.ndim == 3:
                if arr.shape[2] != 1:
                    raise SaliencyError(f"Expected 1-channel image, got {arr.shape}")
                arr = arr[:, :, 0]
        if arr.ndim == 2:
            arr = arr[None]
        if arr.ndim != 3:
            raise SaliencyError(f"Unsupported image shape {arr.shape}")
        return arr
