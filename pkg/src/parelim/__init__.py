"""Blind recovery of parity-check words from noisy linear block code streams."""

__version__ = "0.1.0"

from .channel import ChannelConfig, FrameSpec, bsc_transmit, frame
from .codes import CodeSpec, dual_basis_oracle, encode, hamming74, is_dual_word, random_code, systematic_form
from .gf2 import BitMatrix, EliminationResult, column_eliminate, multiply, rank
from .recovery import (
    CandidateDual,
    RecoveryConfig,
    RecoveryReport,
    column_weights,
    iterative_eliminate,
    clean_window_check,
    verify_candidates,
)
from .search import SweepGrid, SweepScore, sweep
from .stats import (
    DetectionParams,
    ThresholdPlan,
    column_weight_stats,
    fa_probability,
    min_rows,
    nd_probability,
    normal_quantile,
    threshold,
)
