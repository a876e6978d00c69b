"""Fusion network: encoder, task branches with cross-fusion gating, decoders."""

from .arch import ArchConfig
from .cfgm import LAMBDA_INIT, Branch, CFGMLayer, Interaction, TaskBranch
from .checkpoint import (
    HEADER_SIZE,
    decode_checkpoint,
    encode_checkpoint,
    expected_shapes,
    load_checkpoint,
    save_checkpoint,
    tensor_record_size,
)
from .model import GIFNet, build_model, pad_to_window, unpad

__all__ = [
    "HEADER_SIZE",
    "LAMBDA_INIT",
    "ArchConfig",
    "Branch",
    "CFGMLayer",
    "GIFNet",
    "Interaction",
    "TaskBranch",
    "build_model",
    "decode_checkpoint",
    "encode_checkpoint",
    "expected_shapes",
    "load_checkpoint",
    "pad_to_window",
    "save_checkpoint",
    "tensor_record_size",
    "unpad",
]
