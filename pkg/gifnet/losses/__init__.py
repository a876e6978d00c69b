"""Losses: primitives, saliency mixing weights and task objectives."""

from .objectives import (
    LossValue,
    MixWeights,
    dp_private_loss,
    mean_loss,
    mixing_weights,
    mm_private_loss,
    public_loss,
    total_loss,
)
from .primitives import C1, C2, gaussian_window, loss_mse, loss_ssim, ssim
from .saliency import (
    DEFAULT_SCORER,
    SaliencyScorer,
    ScorerRegistry,
    gradf,
    register_scorer,
)

__all__ = [
    "C1",
    "C2",
    "DEFAULT_SCORER",
    "LossValue",
    "MixWeights",
    "SaliencyScorer",
    "ScorerRegistry",
    "dp_private_loss",
    "gaussian_window",
    "gradf",
    "loss_mse",
    "loss_ssim",
    "mean_loss",
    "mixing_weights",
    "mm_private_loss",
    "public_loss",
    "register_scorer",
    "ssim",
    "total_loss",
]
