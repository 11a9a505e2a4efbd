import numpy as np
import pytest

from parelim.codes import CodeSpec
from parelim.gf2 import BitMatrix, rank
from parelim.rng import Rng, random_bits

# four Hamming(7,4) codewords with a known elimination result
HAMMING_DATA = ["1100011", "0100101", "1010101", "0111001"]
HAMMING_TRANSITION = [
    "1100110",
    "0100101",
    "0010011",
    "0001111",
    "0000100",
    "0000010",
    "0000001",
]
HAMMING_REDUCED = ["1000000", "0100000", "1110000", "0111000"]

# four rows whose elimination leaves h = 0111001 as the last transition column
NOISY_DATA = ["1001101", "0101010", "1110110", "0001111"]
NOISY_TRANSITION = [
    "1001010",
    "0101101",
    "0010001",
    "0001111",
    "0000100",
    "0000010",
    "0000001",
]
NOISY_REDUCED = ["1000000", "0100000", "1110000", "0001000"]
NOISY_H = np.array([0, 1, 1, 1, 0, 0, 1], dtype=np.uint8)


@pytest.fixture
def hamming_rows():
    return BitMatrix.from_strings(HAMMING_DATA)


@pytest.fixture
def noisy_rows():
    return BitMatrix.from_strings(NOISY_DATA)


def spanning_codewords(code: CodeSpec, count: int, rng: Rng, window: int = 0) -> np.ndarray:
    """Random codewords whose rows in window ``window`` (size k) are independent."""
    k = code.k
    while True:
        msgs = random_bits(rng, count * k).reshape(count, k)
        block = msgs[window * k : (window + 1) * k]
        if rank(BitMatrix.from_bits(block)) == k:
            return (msgs.astype(np.int64) @ code.generator.to_bits().astype(np.int64) & 1).astype(np.uint8)
