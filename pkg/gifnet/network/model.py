"""File: model.py.

The full fusion network: shared encoder, REC decoder, MM and DP task
branches coupled by cross-fusion gating, and the global decoder.
"""

import logging

import torch
import torch.nn.functional as F
from torch import nn

from gifnet.errors import ShapeMismatchError
from gifnet.network.arch import ArchConfig
from gifnet.network.attention import WindowSelfAttention
from gifnet.network.cfgm import Branch, Interaction, TaskBranch
from gifnet.network.encoder import ConvDecoder, SharedEncoder

# Configure logging
logger = logging.getLogger(__name__)


def pad_to_window(x: torch.Tensor, window: int) -> tuple[torch.Tensor, tuple[int, int]]:
    """Pad a (B, C, H, W) tensor on the bottom/right to window multiples.

    Reflection padding is used when the image is large enough for it,
    replication otherwise. Aligned inputs are returned untouched.

    Returns:
        Tuple of (padded tensor, original (H, W))
    """
    h, w = x.shape[-2:]
    pad_h, pad_w = -h % window, -w % window
    if not pad_h and not pad_w:
        return x, (h, w)
    mode = "reflect" if pad_h < h and pad_w < w else "replicate"
    return F.pad(x, (0, pad_w, 0, pad_h), mode=mode), (h, w)


def unpad(x: torch.Tensor, size: tuple[int, int]) -> torch.Tensor:
    """Crop a padded tensor back to ``size``."""
    h, w = size
    return x[..., :h, :w]


def init_weights(module: nn.Module) -> None:
    """Initialize one module in place (used with ``nn.Module.apply``)."""
    if isinstance(module, nn.Linear):
        nn.init.trunc_normal_(module.weight, std=0.02)
        if module.bias is not None:
            nn.init.zeros_(module.bias)
    elif isinstance(module, nn.Conv2d):
        nn.init.kaiming_uniform_(module.weight, nonlinearity="relu")
        if module.bias is not None:
            nn.init.zeros_(module.bias)
    elif isinstance(module, nn.LayerNorm):
        nn.init.ones_(module.weight)
        nn.init.zeros_(module.bias)
    elif isinstance(module, WindowSelfAttention):
        nn.init.trunc_normal_(module.relative_position_bias_table, std=0.02)


class GIFNet(nn.Module):
    """Generalised image fusion network."""

    def __init__(
        self,
        arch: ArchConfig | None = None,
        interaction: Interaction = Interaction.CFGM,
    ) -> None:
        """Initialize the network.

        Args:
            arch: Architecture config; defaults when omitted
            interaction: How the auxiliary branch feeds the main branch
        """
        super().__init__()
        self.arch = arch or ArchConfig()
        self.interaction = Interaction.parse(interaction)

        shared = self.arch.shared_channels
        self.encoder = SharedEncoder(self.arch)
        self.rec_decoder = ConvDecoder(2 * shared, self.arch.embed_dim)
        self.mm_branch = TaskBranch(self.arch, Branch.MM)
        self.dp_branch = TaskBranch(self.arch, Branch.DP)
        self.global_decoder = ConvDecoder(self.arch.embed_dim, self.arch.embed_dim)

        self.apply(init_weights)

    def branch(self, branch: Branch) -> TaskBranch:
        """Return the module of a task branch."""
        return self.mm_branch if Branch(branch) is Branch.MM else self.dp_branch

    def shared_modules(self) -> list[nn.Module]:
        """Modules updated on every training step whatever the role."""
        return [self.encoder, self.rec_decoder, self.global_decoder]

    def sencoder_forward(self, img: torch.Tensor) -> torch.Tensor:
        """Shared features of a (B, 1|3, H, W) image."""
        return self.encoder(img)

    def encode_pair(self, a: torch.Tensor, b: torch.Tensor) -> torch.Tensor:
        """Encode both images independently and concatenate along channels.

        Raises:
            ShapeMismatchError: If the two images differ in size
        """
        if a.shape[-2:] != b.shape[-2:]:
            raise ShapeMismatchError(
                f"Pair sizes differ: {tuple(a.shape[-2:])} vs {tuple(b.shape[-2:])}",
            )
        return torch.cat([self.encoder(a), self.encoder(b)], dim=1)

    def aux_stream(
        self,
        shared_aux: torch.Tensor,
        branch: Branch,
        track_grad: bool = False,
    ) -> list[torch.Tensor]:
        """Per-layer self-attention outputs of ``branch`` used as auxiliary features."""
        with torch.set_grad_enabled(track_grad and torch.is_grad_enabled()):
            return self.branch(branch).self_stream(shared_aux)

    def branch_forward(
        self,
        shared_main: torch.Tensor,
        shared_aux: torch.Tensor,
        branch: Branch,
        interaction: Interaction | None = None,
    ) -> torch.Tensor:
        """Run ``branch`` as main with the other branch as auxiliary stream.

        Args:
            shared_main: (B, 2S, H, W) shared pair for the main branch
            shared_aux: (B, 2S, H, W) shared pair for the auxiliary branch
            branch: Main branch
            interaction: Override of the model's interaction mode

        Returns:
            (B, embed_dim, H, W) hybrid features

        Raises:
            ShapeMismatchError: If the two shared pairs differ in shape
        """
        if shared_main.shape != shared_aux.shape:
            raise ShapeMismatchError(
                f"Main/aux features differ: {tuple(shared_main.shape)} vs "
                f"{tuple(shared_aux.shape)}",
            )
        mode = Interaction.parse(interaction or self.interaction)
        branch = Branch(branch)
        aux = None
        if mode is not Interaction.NONE:
            aux = self.aux_stream(shared_aux, branch.other)
        return self.branch(branch)(shared_main, aux, mode)

    def gdec_forward(self, features: torch.Tensor) -> torch.Tensor:
        """Global decoder: branch features to a 1-channel image in [0, 1]."""
        return self.global_decoder(features)

    def rec_forward(self, shared_pair: torch.Tensor) -> torch.Tensor:
        """REC decoder: shared pair features to a 1-channel image in [0, 1]."""
        return self.rec_decoder(shared_pair)

    def fuse(self, a: torch.Tensor, b: torch.Tensor) -> torch.Tensor:
        """Fuse two (B, 1, H, W) luma batches with MM as the routed main branch.

        Inputs are padded to window multiples internally and the output is
        cropped back to the input size.
        """
        if a.shape != b.shape:
            raise ShapeMismatchError(
                f"Pair shapes differ: {tuple(a.shape)} vs {tuple(b.shape)}",
            )
        a_pad, size = pad_to_window(a, self.arch.window)
        b_pad, _ = pad_to_window(b, self.arch.window)
        shared = self.encode_pair(a_pad, b_pad)
        features = self.branch_forward(shared, shared, Branch.MM)
        return unpad(self.gdec_forward(features), size)

    def forward(self, a: torch.Tensor, b: torch.Tensor) -> torch.Tensor:
        """Alias of :meth:`fuse`."""
        return self.fuse(a, b)

    @torch.no_grad()
    def feature_maps(self, a: torch.Tensor, b: torch.Tensor) -> dict[str, torch.Tensor]:
        """Intermediate feature maps for a pair, cropped to the input size.

        Returns:
            Dict with ``shared_a``, ``shared_b`` (S-Enc), ``mm`` (MM branch as
            main) and ``dp`` (DP branch self-attention stream)
        """
        a_pad, size = pad_to_window(a, self.arch.window)
        b_pad, _ = pad_to_window(b, self.arch.window)
        shared_a = self.encoder(a_pad)
        shared_b = self.encoder(b_pad)
        shared = torch.cat([shared_a, shared_b], dim=1)
        mm = self.branch_forward(shared, shared, Branch.MM)
        dp = self.dp_branch.self_stream(shared)[-1].permute(0, 3, 1, 2)
        return {
            "shared_a": unpad(shared_a, size),
            "shared_b": unpad(shared_b, size),
            "mm": unpad(mm, size),
            "dp": unpad(dp, size),
        }

    def lambda_values(self) -> list[float]:
        """Current gate values, MM branch first then DP."""
        return [float(g) for g in self.mm_branch.gates] + [
            float(g) for g in self.dp_branch.gates
        ]


def build_model(
    arch: ArchConfig | None = None,
    seed: int = 0,
    interaction: Interaction = Interaction.CFGM,
) -> GIFNet:
    """Construct a freshly initialized network from ``seed``.

    The global torch RNG state is restored afterwards.
    """
    with torch.random.fork_rng(devices=[]):
        torch.manual_seed(seed)
        model = GIFNet(arch, interaction)
    logger.debug(
        f"Built GIFNet ({sum(p.numel() for p in model.parameters())} parameters, seed {seed})",
    )
    return model
