"""Saliency scorers (GradF) and their registry."""

from .base import SaliencyScorer
from .classifier import ClassifierGradScorer
from .registry import ScorerRegistry, register_scorer
from .spatial import LOG_KERNEL, SpatialGradScorer

DEFAULT_SCORER = SpatialGradScorer.name


def gradf(scorer: str | SaliencyScorer, img) -> float:
    """Score ``img`` with a scorer instance or a registered scorer name."""
    if isinstance(scorer, str):
        scorer = ScorerRegistry.create(scorer)
    return scorer.score(img)


__all__ = [
    "DEFAULT_SCORER",
    "LOG_KERNEL",
    "ClassifierGradScorer",
    "SaliencyScorer",
    "ScorerRegistry",
    "SpatialGradScorer",
    "gradf",
    "register_scorer",
]
