"""Iterative elimination: recover dual (parity-check) words from noisy frames.

Each iteration column-eliminates the current data matrix on a window of k
consecutive rows, scores every non-pivot column by its weight over all rows
and admits the matching transition column when the weight is below the
threshold. The transition matrix is carried across iterations, so every
admitted word is expressed in the coordinates of the original frames.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field, replace
from typing import Iterator

import numpy as np

from .codes import CodeSpec, is_dual_word
from .gf2 import BitMatrix, eliminate_inplace, permute_columns, rank, unpack_rows


@dataclass(frozen=True)
class RecoveryConfig:
    n: int
    k: int
    iterations: int = 10
    threshold: float = 1.0
    early_stop: bool = False

    def __post_init__(self):
        if not 1 <= self.k < self.n:
            raise ValueError("need 1 <= k < n")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.threshold <= 0:
            raise ValueError("threshold must be > 0")

    @property
    def expected_dual_rank(self) -> int:
        return self.n - self.k


@dataclass
class CandidateDual:
    word: np.ndarray
    weight: int
    iteration: int
    verified: bool = False

    @property
    def key(self) -> str:
        return "".join("1" if b else "0" for b in self.word)


@dataclass
class RecoveryReport:
    candidates: list[CandidateDual]
    recovered_rank: int
    iterations_run: int
    weights: list[list[int]] = field(default_factory=list)
    config: RecoveryConfig | None = None

    def words(self) -> np.ndarray:
        if not self.candidates:
            return np.zeros((0, self.config.n if self.config else 0), dtype=np.uint8)
        return np.array([c.word for c in self.candidates], dtype=np.uint8)

    @property
    def verified(self) -> list[CandidateDual]:
        return [c for c in self.candidates if c.verified]

    def true_dual_count(self, code: CodeSpec) -> int:
        """Number of distinct candidates that are dual words of ``code``."""
        return sum(is_dual_word(c.word, code) for c in self.candidates)

    def true_dual_rank(self, code: CodeSpec) -> int:
        """Number of independent parity-check words among the candidates."""
        dual = [c.word for c in self.candidates if is_dual_word(c.word, code)]
        if not dual:
            return 0
        return rank(BitMatrix.from_bits(np.array(dual, dtype=np.uint8)))

    def histograms(self) -> list[dict[int, int]]:
        return [dict(zip(*np.unique(w, return_counts=True))) if w else {} for w in self.weights]

    def to_dict(self) -> dict:
        out = {
            "candidates": [
                {"word": c.key, "weight": int(c.weight), "iteration": c.iteration, "verified": c.verified}
                for c in self.candidates
            ],
            "recovered_rank": self.recovered_rank,
            "iterations_run": self.iterations_run,
            "weights": self.weights,
        }
        if self.config is not None:
            cfg = self.config
            out["config"] = {"n": cfg.n, "k": cfg.k, "iterations": cfg.iterations,
                             "threshold": cfg.threshold, "early_stop": cfg.early_stop}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


@dataclass
class IterationState:
    """What one window produced: the pivot count and the non-pivot columns."""

    iteration: int
    window: list[int]
    rank: int
    weights: np.ndarray
    tail_words: np.ndarray  # one transition column per row, in original coordinates


def column_weights(reduced: BitMatrix) -> np.ndarray:
    return reduced.column_weights()


def window_rows(iteration: int, k: int, m_rows: int) -> list[int]:
    """Rows of window ``iteration`` (0-based); windows wrap after ``m_rows // k``."""
    count = m_rows // k
    start = (iteration % count) * k
    return list(range(start, start + k))


def iterate_windows(data: BitMatrix, k: int, iterations: int) -> Iterator[IterationState]:
    m, n = data.shape
    if m < k:
        raise ValueError(f"data has {m} rows, fewer than the window size {k}")
    state = np.vstack([data.words, BitMatrix.identity(n).words])
    for i in range(iterations):
        window = window_rows(i, k, m)
        pivots, order = eliminate_inplace(state, n, window)
        if order != list(range(n)):
            state = permute_columns(state, n, order)
        r = len(pivots)
        bits = unpack_rows(state, n)
        weights = bits[:m, r:].sum(axis=0, dtype=np.int64)
        tail = np.ascontiguousarray(bits[m:, r:].T)
        yield IterationState(i + 1, window, r, weights, tail)


def iterative_eliminate(data: BitMatrix, config: RecoveryConfig) -> RecoveryReport:
    """Run the windowed elimination and collect low-weight transition columns."""
    if data.cols != config.n:
        raise ValueError(f"data has {data.cols} columns, config says n={config.n}")
    if data.rows < config.k:
        raise ValueError(f"data has {data.rows} rows, fewer than k={config.k}")
    if data.rows < config.n:
        warnings.warn(f"M={data.rows} < n={config.n}: rank of the data is limited by the row count",
                      stacklevel=2)
    seen: dict[str, CandidateDual] = {}
    all_weights: list[list[int]] = []
    run = 0
    for it in iterate_windows(data, config.k, config.iterations):
        run = it.iteration
        all_weights.append([int(z) for z in it.weights])
        for z, word in zip(it.weights, it.tail_words):
            # strict comparison; a weight equal to T is rejected
            if z < config.threshold:
                cand = CandidateDual(word.copy(), int(z), it.iteration)
                seen.setdefault(cand.key, cand)
        if config.early_stop and seen and _rank_of(seen.values(), config.n) >= config.expected_dual_rank:
            break
    cands = list(seen.values())
    return RecoveryReport(cands, _rank_of(cands, config.n), run, all_weights, config)


def _rank_of(cands, n: int) -> int:
    cands = list(cands)
    if not cands:
        return 0
    return rank(BitMatrix.from_bits(np.array([c.word for c in cands], dtype=np.uint8)))


def syndrome_weight(data: BitMatrix, word) -> int:
    """Weight of ``data @ word^T``: rows with odd overlap with ``word``."""
    h = np.asarray(word, dtype=np.int64)
    return int(((data.to_bits().astype(np.int64) @ h) & 1).sum())


def verify_candidates(report: RecoveryReport, data: BitMatrix, threshold_full: float,
                      drop: bool = False, exclude_window: bool = True) -> RecoveryReport:
    """Re-score candidates against the unreduced data; flag those below ``threshold_full``.

    A candidate is forced to be orthogonal to the k rows of the window that
    produced it, so by default those rows are left out of its score and
    ``threshold_full`` should be sized for ``M - k`` rows. Pass
    ``exclude_window=False`` to score over every row.
    """
    if not report.candidates:
        return report
    bits = data.to_bits().astype(np.int64)
    words = report.words().astype(np.int64)
    odd = (bits @ words.T) & 1
    if exclude_window and report.config is not None:
        k = report.config.k
        for col, c in enumerate(report.candidates):
            odd[window_rows(c.iteration - 1, k, data.rows), col] = 0
    weights = odd.sum(axis=0)
    cands = [replace(c, verified=bool(w < threshold_full)) for c, w in zip(report.candidates, weights)]
    if drop:
        cands = [c for c in cands if c.verified]
    return replace(report, candidates=cands, recovered_rank=_rank_of(cands, data.cols))


def clean_window_check(data: BitMatrix, code: CodeSpec, window_index: int) -> bool:
    """Check that a clean, independent window yields a full dual basis.

    ``window_index`` is 1-based. When window ``window_index`` holds k
    independent valid codewords, every non-pivot transition column produced
    at that iteration must be a dual word and together they must span the
    dual code, whatever errors sit in earlier windows. If the window does
    not meet that precondition the check is vacuously true.
    """
    k = code.k
    window = data.select_rows(window_rows(window_index - 1, k, data.rows))
    if not code.syndrome(window).is_zero() or rank(window) < k:
        return True
    for it in iterate_windows(data, k, window_index):
        pass
    tail = it.tail_words
    if it.rank != k or tail.shape[0] != code.n - k:
        return False
    if not all(is_dual_word(w, code) for w in tail):
        return False
    return rank(BitMatrix.from_bits(tail)) == code.n - k
