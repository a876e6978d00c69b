"""Binary checkpoint codec.

Layout (little-endian)::

    magic     4 bytes  b"GIFN"
    version   u32      1
    arch      6 x u32  base_channels, enc_layers, branch_layers, embed_dim, heads, window
              f32      mlp_ratio
    count     u32      number of tensors
    tensors   count x (u16 name length, UTF-8 name, u8 rank, rank x u32 dims, f32 data)
"""

import logging
import math
import struct
from pathlib import Path

import numpy as np
import torch

from gifnet.errors import CheckpointError, ConfigError
from gifnet.network.arch import ArchConfig
from gifnet.network.model import GIFNet

# Configure logging
logger = logging.getLogger(__name__)

MAGIC = b"GIFN"
VERSION = 1

_HEADER = struct.Struct("<4sI6IfI")
HEADER_SIZE = _HEADER.size


def tensor_record_size(name: str, shape: tuple[int, ...]) -> int:
    """Bytes taken by one tensor record."""
    return 2 + len(name.encode("utf-8")) + 1 + 4 * len(shape) + 4 * math.prod(shape)


def encode_checkpoint(model: GIFNet) -> bytes:
    """Serialize the model's parameters and architecture."""
    state = model.state_dict()
    arch = model.arch.as_tuple()
    chunks = [_HEADER.pack(MAGIC, VERSION, *arch[:6], arch[6], len(state))]
    for name, tensor in state.items():
        raw_name = name.encode("utf-8")
        data = tensor.detach().cpu().contiguous().numpy().astype("<f4")
        chunks.append(struct.pack("<H", len(raw_name)))
        chunks.append(raw_name)
        chunks.append(struct.pack(f"<B{data.ndim}I", data.ndim, *data.shape))
        chunks.append(data.tobytes())
    return b"".join(chunks)


def expected_shapes(arch: ArchConfig) -> dict[str, tuple[int, ...]]:
    """Parameter shapes of a model with ``arch``, computed without allocating it."""
    with torch.device("meta"):
        skeleton = GIFNet(arch)
    return {name: tuple(tensor.shape) for name, tensor in skeleton.state_dict().items()}


class _Reader:
    """Bounds-checked cursor over checkpoint bytes."""

    def __init__(self, buf: bytes, source: str) -> None:
        self.buf = buf
        self.offset = 0
        self.source = source

    def take(self, size: int) -> bytes:
        end = self.offset + size
        if end > len(self.buf):
            raise CheckpointError(
                f"Checkpoint '{self.source}' is truncated at byte {self.offset}",
            )
        chunk = self.buf[self.offset : end]
        self.offset = end
        return chunk

    def unpack(self, fmt: str) -> tuple:
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def decode_checkpoint(buf: bytes, source: str = "<bytes>") -> GIFNet:
    """Rebuild a model from checkpoint bytes.

    Raises:
        CheckpointError: On a bad magic or version, truncation, trailing
            bytes, or tensors that disagree with the embedded architecture
    """
    reader = _Reader(buf, source)
    magic, version, *dims, mlp_ratio, count = reader.unpack(_HEADER.format)
    if magic != MAGIC:
        raise CheckpointError(f"'{source}' is not a gifnet checkpoint (magic {magic!r})")
    if version != VERSION:
        raise CheckpointError(
            f"Checkpoint '{source}' has version {version}, expected {VERSION}",
        )
    try:
        arch = ArchConfig(*dims, mlp_ratio=mlp_ratio)
    except ConfigError as exc:
        raise CheckpointError(f"Checkpoint '{source}' embeds an invalid arch: {exc}") from exc

    state: dict[str, torch.Tensor] = {}
    for _ in range(count):
        (name_len,) = reader.unpack("<H")
        raw_name = reader.take(name_len)
        try:
            name = raw_name.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CheckpointError(
                f"Checkpoint '{source}' has a tensor name that is not UTF-8 "
                f"at byte {reader.offset - name_len}",
            ) from exc
        (rank,) = reader.unpack("<B")
        shape = reader.unpack(f"<{rank}I")
        n_bytes = 4 * math.prod(shape)
        data = np.frombuffer(reader.take(n_bytes), dtype="<f4").reshape(shape)
        state[name] = torch.from_numpy(data.astype(np.float32))
    if reader.offset != len(buf):
        raise CheckpointError(
            f"Checkpoint '{source}' has {len(buf) - reader.offset} trailing bytes",
        )

    expected = expected_shapes(arch)
    missing = sorted(set(expected) - set(state))
    unexpected = sorted(set(state) - set(expected))
    if missing or unexpected:
        raise CheckpointError(
            f"Checkpoint '{source}' tensors disagree with its arch "
            f"(missing: {missing[:3]}, unexpected: {unexpected[:3]})",
        )
    for name, shape in expected.items():
        if tuple(state[name].shape) != shape:
            raise CheckpointError(
                f"Checkpoint '{source}': tensor '{name}' has shape "
                f"{tuple(state[name].shape)}, arch requires {shape}",
            )
    model = GIFNet(arch)
    model.load_state_dict(state)
    return model


def save_checkpoint(model: GIFNet, path: str | Path) -> Path:
    """Write ``model`` to ``path``.

    Raises:
        CheckpointError: If the file cannot be written
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(encode_checkpoint(model))
    except OSError as exc:
        raise CheckpointError(f"Cannot write checkpoint '{path}': {exc}") from exc
    logger.info(f"Checkpoint written to {path}")
    return path


def load_checkpoint(path: str | Path) -> GIFNet:
    """Read a model from ``path`` (returned in eval mode).

    Raises:
        CheckpointError: If the file is missing or malformed
    """
    path = Path(path)
    try:
        buf = path.read_bytes()
    except FileNotFoundError as exc:
        raise CheckpointError(f"Checkpoint not found: {path}") from exc
    except OSError as exc:
        raise CheckpointError(f"Cannot read checkpoint '{path}': {exc}") from exc
    model = decode_checkpoint(buf, str(path))
    model.eval()
    logger.debug(f"Loaded checkpoint {path} ({model.arch})")
    return model
