"""Bit-packed dense matrices over GF(2) and the column elimination operation.

Rows are packed LSB-first into little-endian 64-bit words: bit ``j`` of a
row lives in word ``j // 64`` at bit position ``j % 64``. Pad bits past the
last column are always zero, so a word popcount is a row weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

WORD = 64


def _nwords(cols: int) -> int:
    return (cols + WORD - 1) // WORD


def pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack a 2-D 0/1 array into ``(rows, nwords)`` uint64 words."""
    bits = np.asarray(bits, dtype=np.uint8) & 1
    rows, cols = bits.shape
    nw = _nwords(cols)
    padded = np.zeros((rows, nw * WORD), dtype=np.uint8)
    padded[:, :cols] = bits
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64).reshape(rows, nw)


def unpack_rows(words: np.ndarray, cols: int) -> np.ndarray:
    """Inverse of :func:`pack_rows`; returns a ``(rows, cols)`` uint8 array."""
    words = np.ascontiguousarray(words, dtype="<u8")
    as_bytes = words.view(np.uint8).reshape(words.shape[0], -1)
    return np.unpackbits(as_bytes, axis=1, count=cols, bitorder="little")


class BitMatrix:
    """Dense ``rows x cols`` matrix over GF(2) with bit-packed rows.

    ``words`` is exposed so hot loops can do row surgery directly; callers
    that mutate it must keep the pad bits zero.
    """

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: np.ndarray | None = None):
        if rows < 0 or cols < 1:
            raise ValueError(f"invalid shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        if words is None:
            words = np.zeros((rows, _nwords(cols)), dtype=np.uint64)
        elif words.shape != (rows, _nwords(cols)) or words.dtype != np.uint64:
            raise ValueError("word array does not match shape")
        self.words = words

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_bits(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_bits(cls, bits) -> "BitMatrix":
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2:
            raise ValueError("expected a 2-D bit array")
        if np.any(arr > 1):
            raise ValueError("entries must be 0 or 1")
        return cls(arr.shape[0], arr.shape[1], pack_rows(arr))

    @classmethod
    def from_strings(cls, lines: Iterable[str]) -> "BitMatrix":
        """Build from rows written as '0'/'1' strings, e.g. ``["1010", "0110"]``."""
        rows = [line.strip() for line in lines if line.strip()]
        if not rows:
            raise ValueError("no rows")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        if any(set(r) - {"0", "1"} for r in rows):
            raise ValueError("rows must contain only '0' and '1'")
        return cls.from_bits([[int(c) for c in r] for r in rows])

    def to_bits(self) -> np.ndarray:
        return unpack_rows(self.words, self.cols)

    def to_strings(self) -> list[str]:
        return ["".join("1" if b else "0" for b in row) for row in self.to_bits()]

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.cols, self.words.copy())

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def get(self, i: int, j: int) -> int:
        return int((self.words[i, j // WORD] >> np.uint64(j % WORD)) & np.uint64(1))

    def row(self, i: int) -> np.ndarray:
        return unpack_rows(self.words[i : i + 1], self.cols)[0]

    def column(self, j: int) -> np.ndarray:
        return ((self.words[:, j // WORD] >> np.uint64(j % WORD)) & np.uint64(1)).astype(np.uint8)

    def select_rows(self, idx: Sequence[int]) -> "BitMatrix":
        idx = np.asarray(idx, dtype=np.intp)
        return BitMatrix(len(idx), self.cols, self.words[idx].copy())

    def select_columns(self, idx: Sequence[int]) -> "BitMatrix":
        return BitMatrix.from_bits(self.to_bits()[:, list(idx)])

    def row_weights(self) -> np.ndarray:
        return np.bitwise_count(self.words).sum(axis=1, dtype=np.int64)

    def column_weights(self) -> np.ndarray:
        return self.to_bits().sum(axis=0, dtype=np.int64)

    def is_zero(self) -> bool:
        return not self.words.any()

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_bits(self.to_bits().T)

    @property
    def T(self) -> "BitMatrix":
        return self.transpose()

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return multiply(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.words, other.words)

    def __hash__(self):
        return hash((self.rows, self.cols, self.words.tobytes()))

    def __repr__(self) -> str:
        if self.rows * self.cols <= 256:
            body = "\n  ".join(self.to_strings())
            return f"BitMatrix({self.rows}x{self.cols}\n  {body})"
        return f"BitMatrix({self.rows}x{self.cols})"


def multiply(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Matrix product over GF(2)."""
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.shape} x {b.shape}")
    out = np.zeros((a.rows, b.words.shape[1]), dtype=np.uint64)
    abits = a.to_bits()
    for m in range(a.cols):
        sel = abits[:, m].astype(bool)
        if sel.any():
            out[sel] ^= b.words[m]
    return BitMatrix(a.rows, b.cols, out)


def _row_reduce(words: np.ndarray, cols: int) -> list[int]:
    """Row-reduce packed ``words`` in place (echelon form); return pivot columns."""
    nrows = words.shape[0]
    pivots: list[int] = []
    r = 0
    for col in range(cols):
        if r == nrows:
            break
        w, sh = divmod(col, WORD)
        colbits = (words[r:, w] >> np.uint64(sh)) & np.uint64(1)
        nz = np.flatnonzero(colbits)
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            words[[r, p]] = words[[p, r]]
        below = np.flatnonzero((words[r + 1 :, w] >> np.uint64(sh)) & np.uint64(1)) + r + 1
        if below.size:
            words[below] ^= words[r]
        pivots.append(col)
        r += 1
    return pivots


def rank(a: BitMatrix) -> int:
    """GF(2) rank."""
    if a.rows == 0:
        return 0
    return len(_row_reduce(a.words.copy(), a.cols))


def vstack(mats: Sequence[BitMatrix]) -> BitMatrix:
    cols = {m.cols for m in mats}
    if len(cols) != 1:
        raise ValueError("column counts differ")
    words = np.vstack([m.words for m in mats])
    return BitMatrix(words.shape[0], cols.pop(), words)


def permute_columns(words: np.ndarray, cols: int, order: Sequence[int]) -> np.ndarray:
    """Return packed rows whose column ``p`` is input column ``order[p]``."""
    return pack_rows(unpack_rows(words, cols)[:, list(order)])


@dataclass
class EliminationResult:
    reduced: BitMatrix
    transition: BitMatrix
    pivot_rows: list[int]
    rank: int
    zero_shift_permutation: list[int]


def eliminate_inplace(words: np.ndarray, cols: int, window_rows: Sequence[int]) -> tuple[list[int], list[int]]:
    """Column-eliminate packed ``words`` in place, pivoting only on ``window_rows``.

    Column operations are applied to every row of ``words``. Column positions
    are tracked logically in ``order``; the caller applies the permutation
    (see :func:`permute_columns`). Returns ``(pivot_rows, order)`` where
    ``order[p]`` is the physical column that ends up at position ``p``.
    """
    order = list(range(cols))
    remaining = list(window_rows)
    pivots: list[int] = []
    used = np.zeros(words.shape[1], dtype=np.uint64)
    end = cols
    p = 0
    while p < end and remaining:
        col = order[p]
        w, sh = divmod(col, WORD)
        shift = np.uint64(sh)
        cand = np.flatnonzero((words[remaining, w] >> shift) & np.uint64(1))
        if cand.size == 0:
            # zero on the window: move it to the far right
            order.append(order.pop(p))
            end -= 1
            continue
        i = int(cand[0])
        remaining[0], remaining[i] = remaining[i], remaining[0]
        r = remaining.pop(0)
        used[w] |= np.uint64(1) << shift
        mask = words[r] & ~used
        if mask.any():
            sel = np.flatnonzero((words[:, w] >> shift) & np.uint64(1))
            words[sel] ^= mask
        pivots.append(r)
        p += 1
    return pivots, order


def column_eliminate(matrix: BitMatrix, window_rows: Sequence[int]) -> EliminationResult:
    """Reduce ``matrix`` to column-echelon form on the window rows.

    Pivots are chosen left to right; for each pivot column the first
    remaining window row with a 1 there is swapped in. The pivot column is
    XOR-folded into every later column where the pivot row has a 1, across
    all rows of ``matrix``. Columns that are zero on the window are rotated to
    the right-hand side. The returned ``transition`` satisfies
    ``matrix @ transition == reduced``.
    """
    window_rows = list(window_rows)
    if not window_rows:
        raise ValueError("window_rows is empty")
    if len(set(window_rows)) != len(window_rows):
        raise ValueError("duplicate window rows")
    if min(window_rows) < 0 or max(window_rows) >= matrix.rows:
        raise IndexError("window row out of range")
    n = matrix.cols
    stacked = np.vstack([matrix.words, BitMatrix.identity(n).words])
    pivots, order = eliminate_inplace(stacked, n, window_rows)
    if order != list(range(n)):
        stacked = permute_columns(stacked, n, order)
    m = matrix.rows
    return EliminationResult(
        reduced=BitMatrix(m, n, stacked[:m].copy()),
        transition=BitMatrix(n, n, stacked[m:].copy()),
        pivot_rows=pivots,
        rank=len(pivots),
        zero_shift_permutation=order,
    )


def format_matrix(a: BitMatrix) -> str:
    """Text form: a ``rows cols`` header, then one '0'/'1' line per row."""
    lines = [f"{a.rows} {a.cols}"]
    lines.extend(a.to_strings())
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> BitMatrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    try:
        rows, cols = (int(x) for x in lines[0].split())
    except ValueError as exc:
        raise ValueError(f"bad header line {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != rows:
        raise ValueError(f"header says {rows} rows, found {len(body)}")
    if rows == 0:
        return BitMatrix(0, cols)
    mat = BitMatrix.from_strings(body)
    if mat.cols != cols:
        raise ValueError(f"header says {cols} columns, found {mat.cols}")
    return mat


def read_matrix(path: str | Path) -> BitMatrix:
    return parse_matrix(Path(path).read_text())


def write_matrix(path: str | Path, a: BitMatrix) -> None:
    Path(path).write_text(format_matrix(a))
