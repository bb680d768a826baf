# zakframe/theory.py
"""
Closed-form side of the random-periodic frame theorem: Hoeffding bound,
mesh width, per-branch failure probabilities and the sample-complexity threshold.

    δ = q / (4KC)
    S = (4CK/q + 1)²                                  mesh-count surrogate
    p_upper = S · exp(-2m(β - q/2)² / K⁴)
    p_lower = S · exp(-2m(α - q/2)² / K⁴)
    m > K⁴ / (2(· - q/2)²) · ln(2S/ε)                 for both branches
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterator, Sequence, Tuple

import numpy as np

from .constants import WindowConstants
from .errors import DegenerateRangeError, HypothesisViolation, SpecValidationError

log = logging.getLogger(__name__)

# floor(1/δ) tolerance so δ = 1/120 counts 121 lattice points per axis
_MESH_FLOOR_SLACK = 1e-9


@dataclass(frozen=True)
class ComplexityQuery:
    constants: WindowConstants
    alpha: float
    beta: float
    eps: float

    def __post_init__(self) -> None:
        check_hypotheses(self.constants, self.alpha, self.beta, self.eps)


@dataclass(frozen=True)
class ComplexityResult:
    m_threshold: int
    branch_lower: float
    branch_upper: float
    delta: float
    mesh_points: int
    mesh_surrogate: float
    log_factor: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m_threshold": self.m_threshold,
            "branch_lower": self.branch_lower,
            "branch_upper": self.branch_upper,
            "delta": self.delta,
            "mesh_points": self.mesh_points,
            "mesh_surrogate": self.mesh_surrogate,
            "log_factor": self.log_factor,
        }


@dataclass(frozen=True)
class FailureBounds:
    p1: float                 # upper branch (β)
    p2: float                 # lower branch (α)
    p1_unclamped: float
    p2_unclamped: float

    def __iter__(self) -> Iterator[float]:
        yield self.p1
        yield self.p2

    @property
    def total(self) -> float:
        return min(1.0, self.p1 + self.p2)

    def to_dict(self) -> Dict[str, float]:
        return {"p1": self.p1, "p2": self.p2, "total": self.total}


def hoeffding_bound(n: int, ranges: Sequence[Tuple[float, float]], t: float) -> float:
    """P(mean - E[mean] ≥ t) ≤ exp(-2n²t² / Σ(b_i - a_i)²), clamped at 1."""
    if int(n) != n or n < 1:
        raise SpecValidationError(f"hoeffding_bound needs n >= 1, got {n}")
    if not t > 0:
        raise SpecValidationError(f"deviation t must be positive, got {t}")
    r = np.asarray(ranges, dtype=float).reshape(-1, 2)
    if np.any(r[:, 1] < r[:, 0]):
        raise SpecValidationError("each range needs a_i <= b_i")
    spread = float(np.sum((r[:, 1] - r[:, 0]) ** 2))
    if spread == 0.0:
        raise DegenerateRangeError("all ranges are degenerate (b_i == a_i)")
    return min(1.0, math.exp(-2.0 * n * n * t * t / spread))


def hoeffding_uniform_bound(n: int, width: float, t: float) -> float:
    """hoeffding_bound for n variables sharing one range of the given width: exp(-2nt² / width²)."""
    if int(n) != n or n < 1:
        raise SpecValidationError(f"hoeffding_bound needs n >= 1, got {n}")
    if not t > 0:
        raise SpecValidationError(f"deviation t must be positive, got {t}")
    if not width >= 0:
        raise SpecValidationError(f"range width must be nonnegative, got {width}")
    if width == 0.0:
        raise DegenerateRangeError("all ranges are degenerate (b_i == a_i)")
    return min(1.0, math.exp(-2.0 * n * t * t / (width * width)))


def mesh_width(constants: WindowConstants) -> Tuple[float, int]:
    """(δ, exact lattice count of δℤ² ∩ [0,1]²)."""
    K, q, C = _kqc(constants)
    delta = q / (4.0 * K * C)
    per_axis = math.floor(1.0 / delta + _MESH_FLOOR_SLACK) + 1
    return delta, per_axis * per_axis


def mesh_surrogate(constants: WindowConstants) -> float:
    K, q, C = _kqc(constants)
    return (4.0 * C * K / q + 1.0) ** 2


def check_hypotheses(constants: WindowConstants, alpha: float, beta: float, eps: float) -> None:
    q = constants.q
    if not 0.0 < eps < 1.0:
        raise HypothesisViolation(f"eps must lie in (0,1), got {eps}")
    if not alpha > 0:
        raise HypothesisViolation(f"alpha must be positive, got {alpha}")
    if not alpha < q / 2.0:
        raise HypothesisViolation(f"hypothesis violation: alpha = {alpha:.6g} must be below q/2 = {q / 2:.6g}")
    if not beta > q / 2.0:
        raise HypothesisViolation(f"hypothesis violation: beta = {beta:.6g} must exceed q/2 = {q / 2:.6g}")


def sample_complexity(query: ComplexityQuery) -> ComplexityResult:
    c = query.constants
    K, q, _C = _kqc(c)
    S = mesh_surrogate(c)
    log_factor = math.log(2.0 * S / query.eps)
    scale = K ** 4 / 2.0
    branch_upper = scale / (query.beta - q / 2.0) ** 2 * log_factor
    branch_lower = scale / (query.alpha - q / 2.0) ** 2 * log_factor
    m = math.floor(max(branch_lower, branch_upper)) + 1
    delta, points = mesh_width(c)
    log.debug("complexity: branches lower=%.6f upper=%.6f -> m=%d", branch_lower, branch_upper, m)
    return ComplexityResult(m, branch_lower, branch_upper, delta, points, S, log_factor)


def failure_probability_bounds(constants: WindowConstants, alpha: float, beta: float, m: int) -> FailureBounds:
    """Union-bound failure probabilities of the two branches (each summed over the mesh surrogate)."""
    check_hypotheses(constants, alpha, beta, 0.5)
    if int(m) != m or m < 0:
        raise SpecValidationError(f"m must be a nonnegative integer, got {m}")
    K, q, _C = _kqc(constants)
    S = mesh_surrogate(constants)
    # each |Z(T_x g)|² lies in [0, K²]
    raw = []
    for dev in (beta - q / 2.0, q / 2.0 - alpha):
        raw.append(S if m == 0 else S * hoeffding_uniform_bound(m, K * K, dev))
    p1, p2 = (min(1.0, max(0.0, v)) for v in raw)
    log.debug("failure bounds at m=%d: unclamped p1=%.6g p2=%.6g", m, raw[0], raw[1])
    return FailureBounds(p1, p2, raw[0], raw[1])


def upper_event_attainable(constants: WindowConstants, beta: float) -> bool:
    """
    G ≤ mβ everywhere needs β ≥ R: averaging G over t gives exactly m·Φ_ĝ(-ξ)
    for any point set, and max Φ_ĝ = R.
    """
    if constants.R is None:
        return True
    return beta >= constants.R


def lower_event_attainable(constants: WindowConstants, alpha: float) -> bool:
    """Mirror of the above: G ≥ mα everywhere needs α ≤ q."""
    return alpha <= constants.q


# ------------------------------------------------------------------------------
# Internals
# ------------------------------------------------------------------------------
def _kqc(constants: WindowConstants) -> Tuple[float, float, float]:
    K, q, C = constants.K, constants.q, constants.C
    if not (K > 0 and q > 0 and C > 0):
        raise SpecValidationError(f"constants must be positive: K={K}, q={q}, C={C}")
    return K, q, C
