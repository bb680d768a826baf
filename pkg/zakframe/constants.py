# zakframe/constants.py
"""
Window constants for the random-periodic frame theorem.

- K, K'  sup of the periodized |g| (time) and |ĝ| (frequency)       (assumption 1)
- q, R   inf / sup of Φ_ĝ(ξ) = Σ_l |ĝ(ξ+l)|²                           (assumption 2)
- C      Lipschitz bound of Zg on Q in the sup metric               (assumption 3)

Raw values are grid extrema. Certified values add a continuity correction
(inflation × empirical slope × grid step); certified C is a heuristic
inflation of the raw grid maximum, not a proof.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Mapping, Optional

import numpy as np

from .config import NumericsConfig, resolve, use_config
from .errors import AssumptionViolation, SpecValidationError
from .types import COMPACT_FAMILIES, CONSTANT_MODES, check_side
from .windows import (WindowSpec, bspline_values, envelope, eval_freq, eval_time,
                      truncation_radius)
from .zak import zak_derivative_grids

log = logging.getLogger(__name__)

CONSTANT_NAMES = ("K", "Kprime", "q", "R", "C")

HEURISTIC_C_WARNING = ("certified C is the raw grid maximum of |dZ/dt| + |dZ/dxi| times the inflation "
                       "factor; it is a heuristic, not a proof")

_CHUNK_CELLS = 1 << 22


@dataclass(frozen=True)
class Estimate:
    raw: float
    certified: float
    tail: float = 0.0
    slope: float = 0.0
    L: int = 0
    grid: int = 0

    def __iter__(self) -> Iterator[float]:
        # unpacks as (raw, certified)
        yield self.raw
        yield self.certified

    def pick(self, mode: str) -> float:
        return self.certified if mode == "certified" else self.raw


@dataclass(frozen=True, eq=False)
class PeriodizationProfile:
    xi: np.ndarray
    phi: np.ndarray
    side: str
    closed_form: Optional[str] = None
    truncation_error: float = 0.0

    @property
    def min(self) -> float:
        return float(np.min(self.phi))

    @property
    def max(self) -> float:
        return float(np.max(self.phi))

    def slope(self) -> float:
        """Largest finite-difference quotient between neighbouring samples."""
        h = self.xi[1] - self.xi[0]
        return float(np.max(np.abs(np.diff(self.phi)))) / h

    def csv_rows(self) -> List[List[float]]:
        return [[float(x), float(p)] for x, p in zip(self.xi, self.phi)]


@dataclass(frozen=True)
class WindowConstants:
    K: float
    Kprime: Optional[float]
    q: float
    R: Optional[float]
    C: float
    mode: str = "raw"
    grid_resolution: int = 0
    inflation_factor: float = 1.0
    spec_id: str = ""
    heuristic_C: bool = False
    raw: Dict[str, Optional[float]] = field(default_factory=dict)
    provenance: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "spec_id": self.spec_id,
            "mode": self.mode,
            "K": self.K,
            "Kprime": self.Kprime,
            "q": self.q,
            "R": self.R,
            "C": self.C,
            "grid_resolution": self.grid_resolution,
            "inflation_factor": self.inflation_factor,
            "heuristic_C": self.heuristic_C,
            "raw": dict(self.raw),
            "provenance": {k: dict(v) for k, v in self.provenance.items()},
        }


# ------------------------------------------------------------------------------
# Periodization
# ------------------------------------------------------------------------------
def periodization_sq(spec: WindowSpec, side: str, N: int, tol: float,
                     cap: Optional[int] = None) -> PeriodizationProfile:
    """Φ(u) = Σ_l |f(u+l)|² on the N+1 nodes s/N of [0,1] (f = g or ĝ)."""
    check_side(side)
    _check_grid(N)
    u = np.arange(N) / N

    if side == "frequency" and spec.family in COMPACT_FAMILIES:
        # Φ_ĝ(ξ) = Σ_k ⟨g, T_k g⟩ e^{-2πikξ}; for βⁿ the autocorrelation is β^{2n+1}(n+1+k)
        n = 0 if spec.family == "indicator" else spec.n
        ks = np.arange(1, n + 1)
        a0 = float(bspline_values(2 * n + 1, np.array([n + 1.0]))[0])
        ak = bspline_values(2 * n + 1, n + 1.0 + ks)
        phi = a0 + 2.0 * np.cos(2.0 * np.pi * np.outer(u, ks)) @ ak if n else np.full(N, a0)
        tag = "1" if n == 0 else "autocorrelation"
        return _profile(u, phi, side, tag, 0.0)

    L, tail = truncation_radius(spec, side, float(tol), 2.0, cap)
    fn = (lambda x: eval_time(spec, x)) if side == "time" else (lambda x: eval_freq(spec, x))
    phi = _periodized(fn, u, L, power=2)
    tag = "1" if (spec.family == "indicator" and side == "time") else None
    return _profile(u, phi, side, tag, tail)


# ------------------------------------------------------------------------------
# Assumption 1
# ------------------------------------------------------------------------------
def estimate_K(spec: WindowSpec, side: str = "time", N: int = 4096, tol: float = 1e-10,
               *, inflation: float = 1.1, cap: Optional[int] = None) -> Estimate:
    """raw = grid max of Σ_l |f(u+l)| plus tail; certified adds inflation · slope · h."""
    check_side(side)
    _check_grid(N)
    L, tail = truncation_radius(spec, side, float(tol), 1.0, cap)
    u = np.arange(N) / N
    fn = (lambda x: eval_time(spec, x)) if side == "time" else (lambda x: eval_freq(spec, x))
    S = _periodized(fn, u, L, power=1)
    slope = float(np.max(np.abs(np.diff(np.append(S, S[0]))))) * N
    raw = float(np.max(S)) + tail
    certified = raw + inflation * slope / N
    log.debug("K[%s] %s: raw=%.12g cert=%.12g L=%d tail=%.2e", side, spec.label, raw, certified, L, tail)
    return Estimate(raw, certified, tail, slope, L, N)


def estimate_Kprime(spec: WindowSpec, config: Optional[NumericsConfig] = None) -> Estimate:
    """K' with the cheap frequency grid; capped tails are added, so the value stays an upper bound."""
    cfg = resolve(config)
    with use_config(cfg):
        return estimate_K(spec, "frequency", cfg.kprime_grid, cfg.zak_tol,
                          inflation=cfg.inflation, cap=cfg.kprime_max_truncation)


# ------------------------------------------------------------------------------
# Assumption 2
# ------------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class QREstimate:
    q: Estimate
    R: Estimate
    profile: PeriodizationProfile

    def __iter__(self) -> Iterator[float]:
        yield self.q.raw
        yield self.R.raw


def estimate_qR(spec: WindowSpec, N: int = 4096, tol: float = 1e-10, *,
                inflation: float = 1.1, mode: str = "raw") -> QREstimate:
    """q, R from the frequency-side periodization; assumption 2 fails if the selected q ≤ 0."""
    _check_mode(mode)
    prof = periodization_sq(spec, "frequency", N, tol)
    slope = prof.slope()
    corr = inflation * slope / N
    q = Estimate(prof.min, prof.min - corr, prof.truncation_error, slope, 0, N)
    R = Estimate(prof.max, prof.max + prof.truncation_error + corr, prof.truncation_error, slope, 0, N)
    if q.pick(mode) <= 0:
        raise AssumptionViolation(2, f"{spec.label}: {mode} q = {q.pick(mode):.3e} <= 0 "
                                     f"(periodization of |ĝ|² vanishes or nearly vanishes)")
    return QREstimate(q, R, prof)


# ------------------------------------------------------------------------------
# Assumption 3
# ------------------------------------------------------------------------------
def check_continuity(spec: WindowSpec, mode: str = "raw") -> None:
    if not spec.is_continuous:
        raise AssumptionViolation(3, f"{spec.label} is discontinuous, so its Zak transform jumps "
                                     f"across t = const lines and has no Lipschitz bound")
    if mode == "certified" and spec.family in ("tp", "sampled"):
        # no analytic derivative: fall back on the decay sufficient for bounded partials
        for side in ("time", "frequency"):
            env = envelope(spec, side)
            if not env.extra_decay:
                raise AssumptionViolation(3, f"{spec.label}: {side} decay of order {env.order:g} "
                                             f"is not above 2, partial derivatives of Zg are not controlled")


def estimate_C(spec: WindowSpec, N: int = 512, tol: float = 1e-10, *,
               inflation: float = 1.1, mode: str = "raw") -> Estimate:
    """raw = grid max of |∂_t Zg| + |∂_ξ Zg| (sup-metric Lipschitz constant); certified = inflation × raw."""
    _check_mode(mode)
    _check_grid(N)
    check_continuity(spec, mode)
    dt, dxi = zak_derivative_grids(spec, N, N, tol)
    raw = float(np.max(np.abs(dt) + np.abs(dxi)))
    log.debug("C %s: raw=%.6g on %dx%d", spec.label, raw, N, N)
    return Estimate(raw, inflation * raw, 0.0, 0.0, 0, N)


# ------------------------------------------------------------------------------
# Assembly
# ------------------------------------------------------------------------------
def assemble_constants(spec: WindowSpec, config: Optional[NumericsConfig] = None,
                       overrides: Optional[Mapping[str, float]] = None,
                       mode: Optional[str] = None) -> WindowConstants:
    """
    Estimate all five constants for `spec` and check 0 < q ≤ R ≤ K'².
    Assumption 3 is checked first so discontinuous windows fail fast.
    Overridden constants are taken as given and marked in the provenance.
    """
    cfg = resolve(config)
    with use_config(cfg):
        return _assemble_constants(spec, cfg, overrides, mode)


def _assemble_constants(spec: WindowSpec, cfg: NumericsConfig, overrides: Optional[Mapping[str, float]],
                        mode: Optional[str]) -> WindowConstants:
    mode = cfg.mode if mode is None else mode
    _check_mode(mode)
    ov = _clean_overrides(overrides)
    tol = cfg.zak_tol

    if "C" not in ov:
        check_continuity(spec, mode)

    values: Dict[str, Optional[float]] = {}
    raw: Dict[str, Optional[float]] = {}
    prov: Dict[str, Dict[str, Any]] = {}

    def take(name: str, est: Optional[Estimate], **extra: Any) -> None:
        if name in ov:
            values[name] = raw[name] = ov[name]
            prov[name] = {"source": "override"}
            return
        values[name] = est.pick(mode)
        raw[name] = est.raw
        prov[name] = {"source": "estimated", "grid": est.grid, "tol": tol,
                      "truncation_radius": est.L, "tail": est.tail, "inflation": cfg.inflation, **extra}

    log.info("estimating constants for %s (%s mode)", spec.label, mode)
    take("K", None if "K" in ov else
         estimate_K(spec, "time", cfg.constants_grid, tol, inflation=cfg.inflation, cap=cfg.max_truncation))
    take("Kprime", None if "Kprime" in ov else estimate_Kprime(spec, cfg))

    if "q" in ov and "R" in ov:
        take("q", None)
        take("R", None)
    else:
        qr = estimate_qR(spec, cfg.constants_grid, tol, inflation=cfg.inflation,
                         mode=("raw" if "q" in ov else mode))
        take("q", qr.q, closed_form=qr.profile.closed_form)
        take("R", qr.R, closed_form=qr.profile.closed_form)

    heuristic = "C" not in ov
    take("C", None if "C" in ov else
         estimate_C(spec, cfg.c_grid, tol, inflation=cfg.inflation, mode=mode))
    if heuristic and mode == "certified":
        log.warning("%s", HEURISTIC_C_WARNING)
        prov["C"]["caveat"] = HEURISTIC_C_WARNING

    wc = WindowConstants(
        K=values["K"], Kprime=values["Kprime"], q=values["q"], R=values["R"], C=values["C"],
        mode=mode, grid_resolution=cfg.constants_grid, inflation_factor=cfg.inflation,
        spec_id=spec.spec_id, heuristic_C=heuristic, raw=raw, provenance=prov,
    )
    check_invariants(wc)
    return wc


def constants_from_values(K: float, q: float, C: float, R: Optional[float] = None,
                          Kprime: Optional[float] = None, *, spec_id: str = "override") -> WindowConstants:
    """Record built purely from given values (no estimation)."""
    ov = _clean_overrides({"K": K, "q": q, "C": C, "R": R, "Kprime": Kprime})
    prov = {name: {"source": "override"} for name in ov}
    wc = WindowConstants(K=ov["K"], Kprime=ov.get("Kprime"), q=ov["q"], R=ov.get("R"), C=ov["C"],
                         mode="raw", spec_id=spec_id, raw=dict(ov), provenance=prov)
    check_invariants(wc)
    return wc


def check_invariants(wc: WindowConstants, slack: float = 1e-9) -> None:
    for name in ("K", "q", "C"):
        val = getattr(wc, name)
        if not (val > 0 and math.isfinite(val)):
            tag = {"K": 1, "q": 2, "C": 3}[name]
            raise AssumptionViolation(tag, f"{name} = {val} must be positive and finite")
    if wc.R is not None and wc.q > wc.R + slack:
        raise AssumptionViolation(2, f"q = {wc.q:.6g} exceeds R = {wc.R:.6g}")
    # raw R is a grid maximum (never above the true R); K' is an upper bound
    R = wc.raw.get("R", wc.R) if wc.R is not None else None
    if R is not None and wc.Kprime is not None and R > wc.Kprime ** 2 * (1 + slack) + slack:
        raise AssumptionViolation(1, f"R = {R:.6g} exceeds K'^2 = {wc.Kprime ** 2:.6g}")


# ------------------------------------------------------------------------------
# Internals
# ------------------------------------------------------------------------------
def _periodized(fn, u: np.ndarray, L: int, power: int) -> np.ndarray:
    """Σ_{|l|≤L} |fn(u+l)|^power, chunked over l."""
    total = np.zeros(len(u))
    ls = np.arange(-L, L + 1)
    per = max(1, _CHUNK_CELLS // max(1, len(u)))
    for lo in range(0, len(ls), per):
        block = np.abs(fn(u[:, None] + ls[None, lo:lo + per]))
        total += np.sum(block ** power if power != 1 else block, axis=1)
    return total


def _profile(u: np.ndarray, phi: np.ndarray, side: str, tag: Optional[str], tail: float) -> PeriodizationProfile:
    # periodic closure: Φ(1) = Φ(0)
    xi = np.append(u, 1.0)
    vals = np.append(phi, phi[0])
    xi.setflags(write=False)
    vals.setflags(write=False)
    return PeriodizationProfile(xi, vals, side, tag, tail)


def _check_grid(N: int) -> None:
    if int(N) != N or N < 2:
        raise SpecValidationError(f"grid size must be an integer >= 2, got {N}")


def _check_mode(mode: str) -> None:
    if mode not in CONSTANT_MODES:
        raise SpecValidationError(f"mode must be one of {CONSTANT_MODES}, got {mode!r}")


def _clean_overrides(overrides: Optional[Mapping[str, Optional[float]]]) -> Dict[str, float]:
    out: Dict[str, float] = {}
    for name, val in (overrides or {}).items():
        if val is None:
            continue
        if name not in CONSTANT_NAMES:
            raise SpecValidationError(f"unknown constant override {name!r}; expected one of {CONSTANT_NAMES}")
        val = float(val)
        if not (val > 0 and math.isfinite(val)):
            raise SpecValidationError(f"override {name} must be positive and finite, got {val}")
        out[name] = val
    return out
