"""Training objectives: public REC loss, task-private losses and their sum."""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import torch
from scipy.special import softmax

from gifnet.errors import SaliencyError
from gifnet.losses.primitives import loss_mse, loss_ssim

# Added to the softmax temperature so all-zero scores stay finite
TEMPERATURE_EPS = 1e-8


@dataclass
class LossValue:
    """A scalar loss tensor with a float breakdown of its components."""

    scalar: torch.Tensor
    parts: dict[str, float] = field(default_factory=dict)

    @property
    def value(self) -> float:
        """The scalar as a Python float."""
        return float(self.scalar.detach())

    @classmethod
    def zero(cls, *names: str) -> "LossValue":
        """A constant zero loss whose named parts are all 0."""
        return cls(torch.zeros(()), {name: 0.0 for name in names})


@dataclass(frozen=True)
class MixWeights:
    """Softmax mixing proportions of the infrared and visible targets."""

    w_ir: float
    w_vis: float

    def as_tuple(self) -> tuple[float, float]:
        return self.w_ir, self.w_vis


def mixing_weights(g_ir: float, g_vis: float, raw: bool = False) -> MixWeights:
    """Turn two saliency scores into mixing weights.

    Args:
        g_ir: GradF of the infrared image
        g_vis: GradF of the visible image
        raw: Apply softmax to the scores directly instead of dividing by the
            temperature ``(g_ir + g_vis) / 2 + 1e-8``

    Returns:
        Weights summing to 1

    Raises:
        SaliencyError: If a score is negative or not finite
    """
    for label, g in (("g_ir", g_ir), ("g_vis", g_vis)):
        if not math.isfinite(g) or g < 0:
            raise SaliencyError(f"Saliency score {label} must be finite and >= 0, got {g}")
    tau = 1.0 if raw else (g_ir + g_vis) / 2 + TEMPERATURE_EPS
    w_ir, w_vis = softmax(np.array([g_ir, g_vis], dtype=np.float64) / tau)
    return MixWeights(float(w_ir), float(w_vis))


def public_loss(rec: torch.Tensor, vis_luma: torch.Tensor) -> LossValue:
    """REC consistency: SSIM loss plus MSE against the main task's visible luma."""
    l_ssim = loss_ssim(rec, vis_luma)
    l_mse = loss_mse(rec, vis_luma)
    return LossValue(
        l_ssim + l_mse,
        {"ssim": float(l_ssim.detach()), "mse": float(l_mse.detach())},
    )


def mm_private_loss(
    fused: torch.Tensor,
    ir: torch.Tensor,
    vis_luma: torch.Tensor,
    weights: MixWeights,
) -> LossValue:
    """Saliency-weighted MSE of the fused image against both sources."""
    mse_ir = loss_mse(fused, ir)
    mse_vis = loss_mse(fused, vis_luma)
    return LossValue(
        weights.w_ir * mse_ir + weights.w_vis * mse_vis,
        {
            "mse_ir": float(mse_ir.detach()),
            "mse_vis": float(mse_vis.detach()),
            "w_ir": weights.w_ir,
            "w_vis": weights.w_vis,
        },
    )


def mean_loss(losses: Sequence[LossValue]) -> LossValue:
    """Average of per-sample losses; every part is averaged the same way.

    Raises:
        ValueError: If ``losses`` is empty
    """
    if not losses:
        raise ValueError("mean_loss needs at least one loss")
    scalar = torch.stack([loss.scalar for loss in losses]).mean()
    parts = {name: float(np.mean([loss.parts[name] for loss in losses])) for name in losses[0].parts}
    return LossValue(scalar, parts)


def dp_private_loss(fused: torch.Tensor, gt_luma: torch.Tensor) -> LossValue:
    """Supervised MSE against the all-in-focus ground truth."""
    mse = loss_mse(fused, gt_luma)
    return LossValue(mse, {"mse": float(mse.detach())})


def total_loss(pub: LossValue, pri: LossValue) -> LossValue:
    """Sum of public and private losses.

    ``parts`` carries ``pub``, ``pri`` and ``total = pub + pri`` computed in
    Python floats, plus every component prefixed with ``pub.`` or ``pri.``.
    """
    pub_value, pri_value = pub.value, pri.value
    parts = {"total": pub_value + pri_value, "pub": pub_value, "pri": pri_value}
    parts.update({f"pub.{k}": v for k, v in pub.parts.items()})
    parts.update({f"pri.{k}": v for k, v in pri.parts.items()})
    return LossValue(pub.scalar + pri.scalar, parts)
