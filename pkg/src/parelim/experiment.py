"""Synthetic data generation and the rate-1/2 recovery experiment."""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import bsc_transmit
from .codes import CodeSpec, encode, random_code
from .gf2 import BitMatrix
from .recovery import RecoveryConfig, RecoveryReport, iterative_eliminate, verify_candidates
from .rng import Rng, derive_seed, random_bits
from .stats import DetectionParams, default_wt_max, threshold, verification_cut

DEFAULT_PFA = 1e-3
DEFAULT_PND = 1e-2


def synthesize(code: CodeSpec, count: int, epsilon: float, rng: Rng) -> tuple[np.ndarray, np.ndarray]:
    """Encode ``count`` random messages and send them through a BSC.

    Returns ``(clean, noisy)`` as ``(count, n)`` bit arrays. Messages are
    drawn before channel flips, both from ``rng``.
    """
    msgs = random_bits(rng, count * code.k).reshape(count, code.k)
    clean = encode(msgs, code)
    noisy = bsc_transmit(clean, epsilon, rng=rng)
    return clean, noisy


@dataclass(frozen=True)
class ExperimentSpec:
    n: int
    rate: float = 0.5
    epsilons: tuple[float, ...] = (0.001, 0.002, 0.005, 0.01, 0.02, 0.05)
    trials: int = 100
    m_multiplier: int = 10
    iterations: int = 10
    seed: int = 0
    p_fa: float = DEFAULT_PFA

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 < self.rate < 1:
            raise ValueError("rate must lie in (0, 1)")

    @property
    def k(self) -> int:
        return max(1, round(self.n * self.rate))

    @property
    def m_rows(self) -> int:
        return self.m_multiplier * self.k


@dataclass
class TrialResult:
    admitted: int
    verified: int
    true_dual: int
    true_dual_rank: int
    recovered_rank: int


@dataclass
class CellResult:
    n: int
    epsilon: float
    trials: int
    mean: float
    stderr: float
    mean_admitted: float
    mean_verified: float
    mean_rank: float
    wall_time: float
    counts: list[int] = field(default_factory=list)


def run_trial(n: int, k: int, epsilon: float, m_rows: int, iterations: int, p_fa: float,
              seed: int) -> tuple[TrialResult, RecoveryReport, CodeSpec]:
    """One seeded trial: random code, noisy frames, recovery, verification."""
    rng = Rng(seed)
    code = random_code(n, k, rng)
    _, noisy = synthesize(code, m_rows, epsilon, rng)
    data = BitMatrix.from_bits(noisy)
    t = threshold(m_rows, p_fa)
    report = iterative_eliminate(data, RecoveryConfig(n, k, iterations, t))
    params = DetectionParams(epsilon, p_fa, DEFAULT_PND, default_wt_max(n))
    report = verify_candidates(report, data, verification_cut(m_rows - k, params))
    result = TrialResult(
        admitted=len(report.candidates),
        verified=len(report.verified),
        true_dual=report.true_dual_count(code),
        true_dual_rank=report.true_dual_rank(code),
        recovered_rank=report.recovered_rank,
    )
    return result, report, code


def _trial_task(args) -> TrialResult:
    return run_trial(*args)[0]


def cell_seed(seed: int, n: int, epsilon: float) -> int:
    """Seed for one (n, epsilon) cell, independent of the grid it sits in."""
    return derive_seed(derive_seed(seed, n), int(round(epsilon * 1e9)))


def trial_seed(seed: int, n: int, epsilon: float, trial: int) -> int:
    return derive_seed(cell_seed(seed, n, epsilon), trial)


def run_cell(spec: ExperimentSpec, epsilon: float, workers: int = 1) -> CellResult:
    tasks = [(spec.n, spec.k, epsilon, spec.m_rows, spec.iterations, spec.p_fa,
              trial_seed(spec.seed, spec.n, epsilon, t))
             for t in range(spec.trials)]
    start = time.perf_counter()
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_trial_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        results = [_trial_task(t) for t in tasks]
    elapsed = time.perf_counter() - start
    counts = np.array([r.true_dual_rank for r in results], dtype=float)
    sd = counts.std(ddof=1) if len(counts) > 1 else 0.0
    return CellResult(
        n=spec.n,
        epsilon=epsilon,
        trials=spec.trials,
        mean=float(counts.mean()),
        stderr=float(sd / math.sqrt(len(counts))),
        mean_admitted=float(np.mean([r.admitted for r in results])),
        mean_verified=float(np.mean([r.verified for r in results])),
        mean_rank=float(np.mean([r.recovered_rank for r in results])),
        wall_time=elapsed,
        counts=[int(c) for c in counts],
    )


def run_table(spec: ExperimentSpec, workers: int = 1) -> list[CellResult]:
    return [run_cell(spec, eps, workers) for eps in spec.epsilons]


CSV_HEADER = "n,epsilon,trials,mean_recovered,stderr,mean_admitted,mean_verified,mean_rank,wall_time"


def format_csv(cells: list[CellResult]) -> str:
    lines = [CSV_HEADER]
    for c in cells:
        lines.append(f"{c.n},{c.epsilon:g},{c.trials},{c.mean:.4f},{c.stderr:.4f},"
                     f"{c.mean_admitted:.4f},{c.mean_verified:.4f},{c.mean_rank:.4f},{c.wall_time:.3f}")
    return "\n".join(lines) + "\n"
