"""Frame length and synchronization search.

Every (n, offset, k) hypothesis frames the stream, runs a full recovery and
is scored by how many verified dual words it yields per expected dual
dimension ``n - k``. Wrong framings scramble most of the linear structure;
what survives there is false alarms and partial relations.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import FrameSpec, frame
from .gf2 import BitMatrix, rank
from .recovery import RecoveryConfig, iterative_eliminate, verify_candidates
from .stats import DetectionParams, default_wt_max, min_rows, min_rows_exact, threshold, verification_cut


def default_k_hypotheses(n: int) -> list[int]:
    ks = {math.ceil(n / 4), math.ceil(n / 2), math.ceil(3 * n / 4)}
    return sorted(k for k in ks if 1 <= k < n)


@dataclass
class SweepGrid:
    n_candidates: list[int]
    offsets: dict[int, list[int]] | None = None
    rate_hypotheses: list[float] | None = None
    budget: int | None = None
    iterations: int | None = None

    def __post_init__(self):
        if any(n < 4 for n in self.n_candidates):
            raise ValueError("frame lengths below 4 are not searched")
        size = len(self.points())
        if self.budget is not None and self.budget < size:
            raise ValueError(f"budget {self.budget} is smaller than the grid ({size} points)")

    def offsets_for(self, n: int) -> list[int]:
        if self.offsets and n in self.offsets:
            return list(self.offsets[n])
        return list(range(n))

    def ks_for(self, n: int) -> list[int]:
        if not self.rate_hypotheses:
            return default_k_hypotheses(n)
        ks = {min(n - 1, max(1, math.ceil(r * n))) for r in self.rate_hypotheses}
        return sorted(ks)

    def points(self) -> list[tuple[int, int, int]]:
        return [(n, off, k) for n in self.n_candidates for off in self.offsets_for(n) for k in self.ks_for(n)]


@dataclass(frozen=True)
class SweepScore:
    n: int
    offset: int
    k: int
    verified_count: int
    recovered_rank: int
    normalized_score: float
    m_rows: int = 0


@dataclass
class SweepResult:
    scores: list[SweepScore]
    notes: list[str] = field(default_factory=list)

    @property
    def best(self) -> SweepScore | None:
        return self.scores[0] if self.scores else None

    def to_csv(self) -> str:
        lines = ["n,offset,k,verified,rank,score"]
        for s in self.scores:
            lines.append(f"{s.n},{s.offset},{s.k},{s.verified_count},{s.recovered_rank},{s.normalized_score:.6f}")
        return "\n".join(lines) + "\n"


def score_point(stream: np.ndarray, n: int, offset: int, k: int, detection: DetectionParams,
                iterations: int | None = None) -> SweepScore | str:
    """Score one hypothesis, or return a note explaining why it was skipped."""
    params = detection
    available = (stream.size - offset) // n
    needed = max(min_rows_exact(params), 2 * k, n)
    if available < needed:
        return f"n={n} offset={offset} k={k}: {available} frames < {needed} needed, skipped"
    m = min(min_rows(params), available)
    data = frame(stream, FrameSpec(n, offset), max_rows=m)
    its = iterations or max(1, m // k)
    report = iterative_eliminate(data, RecoveryConfig(n, k, its, threshold(m, params.p_fa)))
    # structured but wrong framings leave partial relations that beat the
    # false-alarm cut alone
    report = verify_candidates(report, data, verification_cut(m - k, params), drop=True)
    good = report.candidates
    rnk = rank(BitMatrix.from_bits(np.array([c.word for c in good]))) if good else 0
    return SweepScore(n, offset, k, len(good), rnk, len(good) / (n - k), m)


def sweep(stream, grid: SweepGrid, detection: DetectionParams, wt_max: int | None = None) -> SweepResult:
    """Score every grid point and rank them, best first.

    ``detection.wt_max`` is replaced per frame length by ``wt_max`` or, when
    that is None, by :func:`default_wt_max`. When the stream holds fewer
    frames than the planned M the available frames are used, as long as
    they cover the exact Gaussian requirement. A candidate counts as
    verified when its weight outside its own window is below both the
    false-alarm threshold and the weight a true dual word would stay under
    with probability ``1 - p_nd``.
    """
    stream = np.asarray(stream, dtype=np.uint8).ravel()
    scores: list[SweepScore] = []
    notes: list[str] = []
    for n, offset, k in grid.points():
        params = replace(detection, wt_max=wt_max or default_wt_max(n))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            out = score_point(stream, n, offset, k, params, grid.iterations)
        if isinstance(out, str):
            notes.append(out)
        else:
            scores.append(out)
    scores.sort(key=lambda s: (-s.normalized_score, -s.recovered_rank, s.n, s.offset, s.k))
    return SweepResult(scores, notes)
