"""Binary linear block codes: construction, encoding and dual-word checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .gf2 import BitMatrix, _row_reduce, format_matrix, multiply, parse_matrix, rank
from .rng import Rng, random_bits


@dataclass(frozen=True, eq=False)
class CodeSpec:
    """An (n, k) binary linear code given by generator and parity-check matrices."""

    n: int
    k: int
    generator: BitMatrix
    parity_check: BitMatrix
    column_permutation: list[int] = field(default_factory=list)

    def __post_init__(self):
        if self.generator.shape != (self.k, self.n):
            raise ValueError("generator shape does not match (k, n)")
        if self.parity_check.cols != self.n or self.parity_check.rows != self.n - self.k:
            raise ValueError("parity_check shape does not match (n-k, n)")

    @classmethod
    def from_generator(cls, generator: BitMatrix) -> "CodeSpec":
        _, h_sys, perm = systematic_form(generator)
        return cls(generator.cols, generator.rows, generator, _unpermute(h_sys, perm), perm)

    def check(self) -> None:
        """Raise if the rank or orthogonality invariants do not hold."""
        if rank(self.generator) != self.k:
            raise ValueError("generator is not full rank")
        if self.parity_check.rows and rank(self.parity_check) != self.n - self.k:
            raise ValueError("parity_check is not full rank")
        if self.parity_check.rows and not multiply(self.generator, self.parity_check.T).is_zero():
            raise ValueError("G H^T != 0")

    def syndrome(self, words: BitMatrix) -> BitMatrix:
        return multiply(words, self.parity_check.T)


def hamming74() -> CodeSpec:
    """Systematic Hamming(7,4), G = (I | P)."""
    g = BitMatrix.from_strings(["1000110", "0100101", "0010011", "0001111"])
    h = BitMatrix.from_strings(["1101100", "1011010", "0111001"])
    return CodeSpec(7, 4, g, h)


def _unpermute(h_sys: BitMatrix, perm: list[int]) -> BitMatrix:
    # h_sys is written in permuted coordinates; column p belongs to original column perm[p]
    if h_sys.rows == 0 or perm == list(range(len(perm))):
        return h_sys
    bits = h_sys.to_bits()
    out = np.zeros_like(bits)
    out[:, perm] = bits
    return BitMatrix.from_bits(out)


def systematic_form(generator: BitMatrix) -> tuple[BitMatrix, BitMatrix, list[int]]:
    """Reduce a full-rank generator to ``(I_k | P)`` and derive ``(P^T | I_{n-k})``.

    If the leading k columns are not an information set the columns are
    permuted (pivot columns first, in order). The returned permutation maps
    position ``p`` of the systematic matrices to column ``perm[p]`` of the
    input.
    """
    k, n = generator.shape
    words = generator.words.copy()
    pivots = _row_reduce(words, n)
    if len(pivots) != k:
        raise ValueError(f"generator has rank {len(pivots)} < {k}")
    bits = BitMatrix(k, n, words).to_bits()
    # back-substitute to reduced row echelon form
    for r in range(k - 1, -1, -1):
        c = pivots[r]
        for above in range(r):
            if bits[above, c]:
                bits[above] ^= bits[r]
    rest = [c for c in range(n) if c not in set(pivots)]
    perm = pivots + rest
    g_sys = bits[:, perm]
    p = g_sys[:, k:]
    h_sys = np.hstack([p.T, np.eye(n - k, dtype=np.uint8)]) if n > k else np.zeros((0, n), dtype=np.uint8)
    h_mat = BitMatrix.from_bits(h_sys) if n > k else BitMatrix(0, n)
    return BitMatrix.from_bits(g_sys), h_mat, perm


def random_code(n: int, k: int, seed: int | Rng) -> CodeSpec:
    """Uniformly random full-rank (n, k) code, by rejection sampling on rank."""
    if not 1 <= k < n:
        raise ValueError("need 1 <= k < n")
    rng = seed if isinstance(seed, Rng) else Rng(seed)
    while True:
        g = BitMatrix.from_bits(random_bits(rng, k * n).reshape(k, n))
        if rank(g) == k:
            return CodeSpec.from_generator(g)


def encode(message, code: CodeSpec) -> np.ndarray:
    """Encode a k-bit message (or a batch of messages, one per row)."""
    msg = np.asarray(message, dtype=np.uint8)
    if msg.shape[-1] != code.k:
        raise ValueError(f"message length {msg.shape[-1]} != k={code.k}")
    out = multiply(BitMatrix.from_bits(msg), code.generator).to_bits()
    return out[0] if msg.ndim == 1 else out


def is_dual_word(h, code: CodeSpec) -> bool:
    """True when ``h`` is nonzero and orthogonal to every generator row."""
    h = np.asarray(h, dtype=np.uint8)
    if h.shape != (code.n,):
        raise ValueError(f"expected a length-{code.n} vector")
    if not h.any():
        return False
    return not (code.generator.to_bits().astype(np.int64) @ h & 1).any()


def dual_basis_oracle(code: CodeSpec) -> BitMatrix:
    """Null-space basis of the generator, by plain Gauss-Jordan on a 0/1 array.

    Kept independent of :func:`systematic_form` so it can check it.
    """
    g = code.generator.to_bits().copy()
    k, n = g.shape
    pivots = []
    r = 0
    for c in range(n):
        rows = [i for i in range(r, k) if g[i, c]]
        if not rows:
            continue
        g[[r, rows[0]]] = g[[rows[0], r]]
        for i in range(k):
            if i != r and g[i, c]:
                g[i] ^= g[r]
        pivots.append(c)
        r += 1
        if r == k:
            break
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return BitMatrix(0, n)
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for i, pc in enumerate(pivots):
            basis[t, pc] = g[i, f]
    return BitMatrix.from_bits(basis)


def format_code(code: CodeSpec) -> str:
    return f"{code.n} {code.k}\n" + format_matrix(code.generator) + format_matrix(code.parity_check)


def parse_code(text: str) -> CodeSpec:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    n, k = (int(x) for x in lines[0].split())
    g_rows = int(lines[1].split()[0])
    g = parse_matrix("\n".join(lines[1 : 2 + g_rows]))
    h = parse_matrix("\n".join(lines[2 + g_rows :]))
    return CodeSpec(n, k, g, h)


def write_code(path: str | Path, code: CodeSpec) -> None:
    Path(path).write_text(format_code(code))


def read_code(path: str | Path) -> CodeSpec:
    return parse_code(Path(path).read_text())
