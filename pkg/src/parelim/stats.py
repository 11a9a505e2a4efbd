"""Detection statistics for admitting transition columns as dual words.

The column weight ``Z`` of a reduced column is modelled as Gaussian: with
mean ``M*alpha`` and variance ``M*alpha*(1-alpha)`` when the column comes from
a dual word of weight ``wt`` (``alpha = (1 - (1-2*eps)**wt) / 2``), and with
mean ``M/2`` and variance ``M/4`` otherwise. A column is admitted when
``Z < T``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

# Acklam's rational approximation to the normal quantile
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425

NOISELESS_MARGIN = 32


@dataclass(frozen=True)
class DetectionParams:
    epsilon: float
    p_fa: float = 1e-3
    p_nd: float = 1e-2
    wt_max: int = 4

    def __post_init__(self):
        # epsilon == 0 is representable; min_rows rejects it
        if not 0 <= self.epsilon < 0.5:
            raise ValueError("epsilon must lie in [0, 1/2)")
        if not 0 < self.p_fa <= 0.5 or not 0 < self.p_nd <= 0.5:
            raise ValueError("p_fa and p_nd must lie in (0, 1/2]")
        if self.wt_max < 1:
            raise ValueError("wt_max must be >= 1")


@dataclass(frozen=True)
class ThresholdPlan:
    m_rows: int
    threshold: float
    alpha: float

    def as_dict(self) -> dict:
        return {"M": self.m_rows, "T": self.threshold, "alpha": self.alpha}


@dataclass(frozen=True)
class WeightMoments:
    h0_mean: float
    h0_var: float
    h1_mean: float
    h1_var: float


def default_wt_max(n: int) -> int:
    """Default assumed dual-word weight: ``2 * ceil(log2(n))``."""
    return 2 * math.ceil(math.log2(n))


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _acklam(p: float) -> float:
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
        den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        return num / den
    q = p - 0.5
    r = q * q
    num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
    den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
    return num / den


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF.

    Acklam's approximation followed by one Halley step against ``erfc``.
    The upper half is obtained by symmetry, so the function is exactly odd
    about ``p = 0.5``.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    if p > 0.5:
        return -normal_quantile(1.0 - p)
    if p == 0.5:
        return 0.0
    x = _acklam(p)
    e = 0.5 * math.erfc(-x / math.sqrt(2.0)) - p
    u = e * math.sqrt(2.0 * math.pi) * math.exp(x * x / 2.0)
    return x - u / (1.0 + x * u / 2.0)


def hit_probability(epsilon: float, wt: int) -> float:
    """Probability that one noisy row has odd overlap with a weight-``wt`` dual word."""
    return (1.0 - (1.0 - 2.0 * epsilon) ** wt) / 2.0


def column_weight_stats(epsilon: float, wt: int, m_rows: int) -> WeightMoments:
    x = 1.0 - 2.0 * epsilon
    return WeightMoments(
        h0_mean=m_rows / 2.0 * (1.0 - x**wt),
        h0_var=m_rows / 4.0 * (1.0 - x ** (2 * wt)),
        h1_mean=m_rows / 2.0,
        h1_var=m_rows / 4.0,
    )


def fa_probability(threshold: float, m_rows: int) -> float:
    """P(Z < T) for a column that is not a dual word."""
    return normal_cdf((threshold - m_rows / 2.0) / math.sqrt(m_rows / 4.0))


def nd_probability(threshold: float, m_rows: int, epsilon: float, wt: int) -> float:
    """P(Z > T) for a column that is a dual word of weight ``wt``."""
    alpha = hit_probability(epsilon, wt)
    sd = math.sqrt(m_rows * alpha * (1.0 - alpha))
    if sd == 0.0:
        return 0.0 if threshold > m_rows * alpha else 1.0
    return 1.0 - normal_cdf((threshold - m_rows * alpha) / sd)


def min_rows(params: DetectionParams) -> int:
    """Number of data rows M needed to meet both target error probabilities.

    Uses ``((q(1-p_nd) * sqrt(D) - q(p_fa)) / D) ** 2`` with
    ``D = 1 - (1-2*eps)**(2*wt)``. That value is never allowed to fall
    below the exact root of the two Gaussian conditions,
    ``((q(1-p_nd) * sqrt(D) - q(p_fa)) / (1-2*eps)**wt) ** 2``, so the
    returned M always meets both targets.
    """
    eps, wt = params.epsilon, params.wt_max
    if eps == 0:
        raise ValueError(f"noiseless: choose M >= n + {NOISELESS_MARGIN} instead")
    x = (1.0 - 2.0 * eps) ** wt
    d = 1.0 - x * x
    num = normal_quantile(1.0 - params.p_nd) * math.sqrt(d) - normal_quantile(params.p_fa)
    tabled = (num / d) ** 2
    exact = (num / x) ** 2 if num > 0 else 0.0
    return max(1, math.ceil(max(tabled, exact)))


def min_rows_exact(params: DetectionParams) -> int:
    """Smallest M for which the Gaussian model meets both targets."""
    if params.epsilon == 0:
        raise ValueError(f"noiseless: choose M >= n + {NOISELESS_MARGIN} instead")
    x = (1.0 - 2.0 * params.epsilon) ** params.wt_max
    d = 1.0 - x * x
    num = normal_quantile(1.0 - params.p_nd) * math.sqrt(d) - normal_quantile(params.p_fa)
    return max(1, math.ceil((num / x) ** 2)) if num > 0 else 1


def threshold(m_rows: int, p_fa: float) -> float:
    """Weight cutoff ``T = (M + q(p_fa) * sqrt(M)) / 2``, clamped at 0."""
    if m_rows < 1:
        raise ValueError("m_rows must be >= 1")
    t = 0.5 * (m_rows + normal_quantile(p_fa) * math.sqrt(m_rows))
    if t < 0:
        warnings.warn(f"threshold {t:.3f} < 0 for M={m_rows}, p_fa={p_fa}; clamped to 0", stacklevel=2)
        return 0.0
    return t


def nd_threshold(m_rows: int, epsilon: float, wt: int, p_nd: float) -> float:
    """Weight a dual word of weight ``wt`` stays below with probability ``1 - p_nd``."""
    alpha = hit_probability(epsilon, wt)
    return m_rows * alpha + normal_quantile(1.0 - p_nd) * math.sqrt(m_rows * alpha * (1.0 - alpha))


def verification_cut(m_rows: int, params: DetectionParams) -> float:
    """Cut for re-scoring candidates over ``m_rows`` rows.

    The smaller of the false-alarm threshold and :func:`nd_threshold`;
    exact relations only (cut 1) when the channel is noiseless.
    """
    if params.epsilon == 0:
        return 1.0
    return min(threshold(m_rows, params.p_fa),
               nd_threshold(m_rows, params.epsilon, params.wt_max, params.p_nd))


def plan(params: DetectionParams) -> ThresholdPlan:
    m = min_rows(params)
    return ThresholdPlan(m, threshold(m, params.p_fa), hit_probability(params.epsilon, params.wt_max))
