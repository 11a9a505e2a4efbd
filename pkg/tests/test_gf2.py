import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import (
    HAMMING_REDUCED,
    HAMMING_TRANSITION,
    NOISY_REDUCED,
    NOISY_TRANSITION,
)
from parelim.gf2 import (
    BitMatrix,
    column_eliminate,
    format_matrix,
    multiply,
    pack_rows,
    parse_matrix,
    rank,
    unpack_rows,
)


def naive_multiply(a, b):
    a, b = np.asarray(a), np.asarray(b)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.uint8)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            s = 0
            for m in range(a.shape[1]):
                s ^= int(a[i, m]) & int(b[m, j])
            out[i, j] = s
    return out


def int_rank(bits) -> int:
    """Row-echelon rank with rows held as Python ints."""
    rows = [int("".join(map(str, r)), 2) for r in np.asarray(bits)]
    r = 0
    for bit in reversed(range(np.asarray(bits).shape[1])):
        pivot = next((i for i in range(r, len(rows)) if rows[i] >> bit & 1), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] >> bit & 1:
                rows[i] ^= rows[r]
        r += 1
    return r


bit_arrays = st.tuples(st.integers(1, 12), st.integers(1, 80), st.integers(0, 2**32 - 1)).map(
    lambda t: np.random.default_rng(t[2]).integers(0, 2, size=(t[0], t[1]), dtype=np.uint8)
)


def test_pack_layout_is_lsb_first():
    bits = np.zeros((1, 70), dtype=np.uint8)
    bits[0, [0, 3, 64, 69]] = 1
    words = pack_rows(bits)
    assert words.shape == (1, 2)
    assert int(words[0, 0]) == 0b1001
    assert int(words[0, 1]) == (1 << 0) | (1 << 5)


@given(bit_arrays)
def test_pack_roundtrip_and_zero_pad(bits):
    m = BitMatrix.from_bits(bits)
    assert np.array_equal(m.to_bits(), bits)
    # pad bits stay zero, so word popcounts are row weights
    assert np.array_equal(m.row_weights(), bits.sum(axis=1))
    assert np.array_equal(m.column_weights(), bits.sum(axis=0))
    assert np.array_equal(unpack_rows(m.words, m.cols), bits)


def test_multiply_identity(hamming_rows):
    assert multiply(hamming_rows, BitMatrix.identity(7)) == hamming_rows


def test_multiply_first_elimination_step(hamming_rows):
    gamma1 = np.eye(7, dtype=np.uint8)
    gamma1[0] = [1, 1, 0, 0, 0, 1, 1]
    step1 = BitMatrix.from_strings(["1000000", "0100101", "1110110", "0111001"])
    assert multiply(hamming_rows, BitMatrix.from_bits(gamma1)) == step1


@pytest.mark.parametrize("seed", range(5))
def test_multiply_matches_triple_loop(seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 2, size=(8, 8), dtype=np.uint8)
    b = rng.integers(0, 2, size=(8, 8), dtype=np.uint8)
    got = multiply(BitMatrix.from_bits(a), BitMatrix.from_bits(b))
    assert np.array_equal(got.to_bits(), naive_multiply(a, b))


def test_multiply_wide_matches_triple_loop():
    rng = np.random.default_rng(11)
    a = rng.integers(0, 2, size=(5, 70), dtype=np.uint8)
    b = rng.integers(0, 2, size=(70, 130), dtype=np.uint8)
    got = multiply(BitMatrix.from_bits(a), BitMatrix.from_bits(b))
    assert np.array_equal(got.to_bits(), naive_multiply(a, b))


def test_multiply_dimension_mismatch():
    with pytest.raises(ValueError):
        multiply(BitMatrix.zeros(2, 3), BitMatrix.zeros(2, 3))


def test_rank_identity():
    assert rank(BitMatrix.identity(9)) == 9


def test_rank_of_correct_matrix_example():
    assert rank(BitMatrix.from_strings(["10110", "01101", "11011"])) == 2


@given(bit_arrays)
def test_rank_matches_oracle(bits):
    r = rank(BitMatrix.from_bits(bits))
    assert r == int_rank(bits)
    assert 0 <= r <= min(bits.shape)


def test_hamming_rows_transition_is_bit_exact(hamming_rows):
    res = column_eliminate(hamming_rows, range(4))
    assert res.transition.to_strings() == HAMMING_TRANSITION
    assert res.reduced.to_strings() == HAMMING_REDUCED
    assert res.rank == 4
    assert res.pivot_rows == [0, 1, 2, 3]


def test_noisy_rows_transition_and_dual_word(noisy_rows):
    res = column_eliminate(noisy_rows, range(4))
    assert res.transition.to_strings() == NOISY_TRANSITION
    assert res.reduced.to_strings() == NOISY_REDUCED
    assert "".join(map(str, res.transition.column(6))) == "0111001"


def test_identity_elimination():
    eye = BitMatrix.identity(6)
    res = column_eliminate(eye, range(6))
    assert res.reduced == eye
    assert res.transition == eye


def test_pivot_swaps_in_first_nonzero_window_row():
    m = BitMatrix.from_strings(["0110", "1010", "1101"])
    res = column_eliminate(m, [0, 1, 2])
    assert res.pivot_rows[0] == 1
    assert multiply(m, res.transition) == res.reduced


def test_zero_column_is_shifted_right():
    m = BitMatrix.from_strings(["0110", "0011", "1111"])
    res = column_eliminate(m, [0, 1])
    # column 0 is zero on the window rows and ends up last
    assert res.zero_shift_permutation[-1] == 0
    assert res.rank == 2
    assert multiply(m, res.transition) == res.reduced
    assert not res.reduced.select_rows([0, 1]).to_bits()[:, 2:].any()


def test_dependent_window_rows():
    m = BitMatrix.from_strings(["1100", "1100", "0011", "1111"])
    res = column_eliminate(m, [0, 1, 2])
    assert res.rank == 2
    assert multiply(m, res.transition) == res.reduced


@pytest.mark.parametrize("rows", [[], [0, 0], [5]])
def test_bad_window(rows):
    m = BitMatrix.identity(3)
    with pytest.raises((ValueError, IndexError)):
        column_eliminate(m, rows)


@settings(max_examples=60, deadline=None)
@given(bit_arrays, st.data())
def test_elimination_invariants(bits, data):
    m = BitMatrix.from_bits(bits)
    size = data.draw(st.integers(1, m.rows))
    window = data.draw(st.permutations(range(m.rows)))[:size]
    res = column_eliminate(m, window)
    assert multiply(m, res.transition) == res.reduced
    assert rank(res.transition) == m.cols
    assert res.rank == rank(m.select_rows(window))
    # every column right of the pivots is zero on the window
    assert not res.reduced.select_rows(window).to_bits()[:, res.rank :].any()
    assert rank(res.reduced) == rank(m)
    again = column_eliminate(res.reduced, window)
    assert rank(again.reduced) == rank(m)


def test_text_format_roundtrip(noisy_rows):
    text = format_matrix(noisy_rows)
    assert text.splitlines()[0] == "4 7"
    assert text.splitlines()[1] == "1001101"
    assert parse_matrix(text) == noisy_rows


@pytest.mark.parametrize("text", ["2 3\n101\n", "1 3\n10\n", "1 3\n1a1\n", "x\n"])
def test_text_format_rejects_malformed(text):
    with pytest.raises(ValueError):
        parse_matrix(text)
