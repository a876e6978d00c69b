"""Classifier-gradient saliency scorer (Grad-CAM style).

Scores an image by the total absolute gradient of a DenseNet-121 top logit
with respect to its last feature map. torchvision is imported lazily so the
default scorer works without it.
"""

import logging
import threading
from pathlib import Path

import torch
import torch.nn.functional as F

from gifnet.errors import SaliencyError
from gifnet.losses.saliency.base import ImageLike, SaliencyScorer
from gifnet.losses.saliency.registry import register_scorer

# Configure logging
logger = logging.getLogger(__name__)


@register_scorer
class ClassifierGradScorer(SaliencyScorer):
    """Gradient of a classifier's top logit w.r.t. its last feature map."""

    name = "classifier-grad"
    description = "Grad-CAM style gradients of a DenseNet-121 classifier"

    def __init__(self, network: torch.nn.Module | None = None) -> None:
        """Initialize the scorer.

        Args:
            network: Classifier exposing ``features`` and ``classifier``
                submodules; an unweighted DenseNet-121 when omitted
        """
        super().__init__()
        self.network = network if network is not None else self._densenet()
        self.network.eval()
        for param in self.network.parameters():
            param.requires_grad_(False)
        self._lock = threading.Lock()

    @classmethod
    def from_options(cls, weights_path: str | None = None) -> "ClassifierGradScorer":
        """Build the scorer, loading a DenseNet-121 state dict when given."""
        network = cls._densenet()
        if weights_path:
            path = Path(weights_path)
            try:
                state = torch.load(path, map_location="cpu", weights_only=True)
            except (OSError, RuntimeError) as exc:
                raise SaliencyError(
                    f"Cannot load classifier weights '{path}': {exc}",
                ) from exc
            network.load_state_dict(state)
        else:
            logger.warning(
                "classifier-grad saliency without saliency_weights uses a randomly "
                "initialised DenseNet-121",
            )
        return cls(network)

    @staticmethod
    def _densenet() -> torch.nn.Module:
        try:
            from torchvision.models import densenet121
        except ImportError as exc:
            raise SaliencyError(
                "The classifier-grad backend requires torchvision",
            ) from exc
        return densenet121(weights=None)

    def score(self, img: ImageLike) -> float:
        """Sum of |d top-logit / d last-feature-map| over the batch."""
        planes = torch.from_numpy(self._as_planes(img)).float()
        x = planes[:, None].expand(-1, 3, -1, -1)

        with self._lock, torch.enable_grad():
            with torch.no_grad():
                features = self.network.features(x)
            features.requires_grad_(True)
            pooled = F.adaptive_avg_pool2d(F.relu(features), 1).flatten(1)
            logits = self.network.classifier(pooled)
            top = logits.max(dim=1).values.sum()
            (grads,) = torch.autograd.grad(top, features)
        return float(grads.abs().sum())
