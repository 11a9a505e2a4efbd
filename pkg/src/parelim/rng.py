"""Seeded randomness: xoshiro256** seeded from a 64-bit integer via splitmix64.

Every random draw in the package goes through :class:`Rng`, so a run is
fully determined by its master seed. Trial ``i`` of a run uses
``derive_seed(seed, i)``.
"""

from __future__ import annotations

import numpy as np
from randomgen import Xoshiro256

MASK64 = (1 << 64) - 1


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step; returns ``(new_state, output)``."""
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Per-trial seed: splitmix64 output of ``seed XOR index``."""
    return splitmix64((seed ^ index) & MASK64)[1]


class Rng:
    """xoshiro256** stream. ``raw`` returns uint64 draws in generation order."""

    def __init__(self, seed: int):
        state = seed & MASK64
        s = []
        for _ in range(4):
            state, out = splitmix64(state)
            s.append(out)
        self.seed = seed
        self._bitgen = Xoshiro256(0)
        self._bitgen.state = {
            "bit_generator": self._bitgen.state["bit_generator"],
            "s": np.array(s, dtype=np.uint64),
            "has_uint32": 0,
            "uinteger": 0,
        }

    def raw(self, count: int) -> np.ndarray:
        if count <= 0:
            return np.zeros(0, dtype=np.uint64)
        return np.asarray(self._bitgen.random_raw(count), dtype=np.uint64)


def random_bits(rng: Rng, count: int) -> np.ndarray:
    """``count`` uniform bits, taken LSB-first from successive 64-bit draws."""
    words = rng.raw((count + 63) // 64).astype("<u8")
    bits = np.unpackbits(words.view(np.uint8), bitorder="little")
    return bits[:count]


def bernoulli_mask(rng: Rng, count: int, p: float) -> np.ndarray:
    """One draw per position; position is set when ``draw / 2**64 < p``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    draws = rng.raw(count)
    # draw < p * 2**64 is exact for integer draws against ceil(p * 2**64)
    cut = int(np.ceil(p * 2.0**64))
    if cut >= 1 << 64:
        return np.ones(count, dtype=np.uint8)
    return (draws < np.uint64(cut)).astype(np.uint8)
