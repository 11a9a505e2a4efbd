"""Binary symmetric channel and framing of a bitstream into the data matrix."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .gf2 import BitMatrix
from .rng import Rng, bernoulli_mask


@dataclass(frozen=True)
class ChannelConfig:
    epsilon: float
    seed: int

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError("epsilon must lie in [0, 1]")


@dataclass(frozen=True)
class FrameSpec:
    n: int
    offset: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("frame length must be at least 2")
        if not 0 <= self.offset < self.n:
            raise ValueError("offset must lie in [0, n)")


def bsc_transmit(bits, config: ChannelConfig | float, rng: Rng | None = None) -> np.ndarray:
    """Flip each bit independently with probability ``epsilon``.

    With a :class:`ChannelConfig` the flips come from a fresh stream seeded by
    ``config.seed``; passing ``rng`` draws from an existing stream instead.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    if isinstance(config, ChannelConfig):
        epsilon = config.epsilon
        rng = rng or Rng(config.seed)
    else:
        epsilon = float(config)
        if rng is None:
            raise ValueError("an Rng is required when passing a bare epsilon")
    flips = bernoulli_mask(rng, bits.size, epsilon).reshape(bits.shape)
    return bits ^ flips


def frame(stream, spec: FrameSpec, max_rows: int | None = None) -> BitMatrix:
    """Cut ``stream`` into consecutive length-n rows starting at ``spec.offset``.

    Trailing bits that do not fill a whole row are dropped.
    """
    stream = np.asarray(stream, dtype=np.uint8).ravel()
    usable = stream.size - spec.offset
    rows = usable // spec.n if usable > 0 else 0
    if rows < 1:
        raise ValueError(f"stream of {stream.size} bits is too short for one frame of {spec.n}")
    if max_rows is not None:
        rows = min(rows, max_rows)
    body = stream[spec.offset : spec.offset + rows * spec.n]
    return BitMatrix.from_bits(body.reshape(rows, spec.n))


def pack_stream(bits) -> bytes:
    """Pack bits MSB-first into bytes; the last byte is zero-padded."""
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()


def unpack_stream(data: bytes, nbits: int | None = None) -> np.ndarray:
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    if nbits is not None:
        if nbits > bits.size:
            raise ValueError(f"file holds {bits.size} bits, {nbits} requested")
        bits = bits[:nbits]
    return bits


def write_stream(path: str | Path, bits) -> int:
    """Write a packed bitstream; returns the length in bits."""
    bits = np.asarray(bits, dtype=np.uint8)
    Path(path).write_bytes(pack_stream(bits))
    return int(bits.size)


def read_stream(path: str | Path, nbits: int | None = None) -> np.ndarray:
    return unpack_stream(Path(path).read_bytes(), nbits)
