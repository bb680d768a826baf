# zakframe/montecarlo.py
"""
Seeded Monte Carlo estimate of P(event), the event being m·α ≤ G ≤ m·β on Q.

raw_grid_event    checks the grid extrema of G directly
certified_event   widens them by m·q/2 first, so a pass implies the event on all of Q
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .config import NumericsConfig, resolve, use_config
from .constants import WindowConstants, periodization_sq
from .errors import ConfigError, SpecValidationError, UncertifiableError
from .frame import PointSet, certificate_grid_size, zak_sum_extrema
from .rng import SEED_BITS, derived_seed
from .theory import check_hypotheses, lower_event_attainable, mesh_width
from .types import EVENT_MODE_KEYS
from .windows import WindowSpec
from .zak import zak_rows

log = logging.getLogger(__name__)

# profile resolution for R when the constants do not carry it
_PROFILE_GRID = 256


@dataclass(frozen=True)
class MonteCarloConfig:
    spec: WindowSpec
    constants: Optional[WindowConstants] = None
    alpha: float = 0.5
    beta: float = 1.5
    eps: float = 0.1
    m: int = 1
    trials: int = 1
    master_seed: int = 0
    Nt: Optional[int] = None
    Nxi: Optional[int] = None
    mode: str = "raw_grid_event"
    tol: float = 1e-10
    workers: int = 1

    def __post_init__(self) -> None:
        if self.mode not in EVENT_MODE_KEYS:
            raise ConfigError(f"mode must be one of {EVENT_MODE_KEYS}, got {self.mode!r}")
        if isinstance(self.trials, bool) or int(self.trials) != self.trials or self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 1:
            raise ConfigError(f"m must be >= 1, got {self.m}")
        if int(self.master_seed) != self.master_seed or not 0 <= self.master_seed < 1 << SEED_BITS:
            raise ConfigError(f"master seed must be an unsigned 64-bit integer, got {self.master_seed}")
        for name in ("Nt", "Nxi"):
            val = getattr(self, name)
            if val is not None and val < 2:
                raise ConfigError(f"{name} must be >= 2, got {val}")
        if not (self.alpha > 0 and self.beta > 0):
            raise ConfigError("alpha and beta must be positive")
        if not 0.0 < self.eps < 1.0:
            raise ConfigError(f"eps must lie in (0,1), got {self.eps}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.mode == "certified_event":
            if self.constants is None:
                raise ConfigError("certified_event mode needs window constants")
            check_hypotheses(self.constants, self.alpha, self.beta, self.eps)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "window": self.spec.to_dict(),
            "constants": None if self.constants is None else self.constants.to_dict(),
            "alpha": self.alpha, "beta": self.beta, "eps": self.eps,
            "m": self.m, "trials": self.trials, "master_seed": self.master_seed,
            "Nt": self.Nt, "Nxi": self.Nxi, "mode": self.mode, "tol": self.tol,
        }


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    grid_min_over_m: float
    grid_max_over_m: float
    lower_pass: bool
    upper_pass: bool
    passed: bool

    def csv_row(self) -> List[Any]:
        return [self.trial, self.seed, repr(self.grid_min_over_m), repr(self.grid_max_over_m),
                int(self.lower_pass), int(self.upper_pass), int(self.passed)]


TRIAL_CSV_HEADER = ["trial", "seed", "grid_min_over_m", "grid_max_over_m", "lower_pass", "upper_pass", "pass"]


@dataclass(frozen=True)
class MonteCarloReport:
    records: Tuple[TrialRecord, ...]
    empirical_success: float
    lower_success: float
    upper_success: float
    theoretical_floor: float
    config: MonteCarloConfig
    grid: Tuple[int, int]
    warnings: Tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "empirical_success": self.empirical_success,
            "lower_success": self.lower_success,
            "upper_success": self.upper_success,
            "theoretical_floor": self.theoretical_floor,
            "grid": list(self.grid),
            "trials": [
                {"trial": r.trial, "seed": r.seed, "grid_min_over_m": r.grid_min_over_m,
                 "grid_max_over_m": r.grid_max_over_m, "lower_pass": r.lower_pass,
                 "upper_pass": r.upper_pass, "pass": r.passed}
                for r in self.records
            ],
            "config": self.config.to_dict(),
        }


@dataclass(frozen=True)
class ScanResult:
    m_found: Optional[int]
    reports: Tuple[MonteCarloReport, ...]


def sample_points(m: int, master_seed: int, trial_index: int) -> PointSet:
    return PointSet.sampled(m, master_seed, trial_index)


def event_grid(config: MonteCarloConfig, numerics: Optional[NumericsConfig] = None) -> Tuple[int, int]:
    """Certificate grid in certified mode; the configured or default grid otherwise."""
    cfg = resolve(numerics)
    if config.mode == "certified_event":
        delta, _count = mesh_width(config.constants)
        N = certificate_grid_size(delta, cfg)
        return N, N
    return (config.Nt or cfg.montecarlo_grid, config.Nxi or cfg.montecarlo_grid)


def run_trials(config: MonteCarloConfig, numerics: Optional[NumericsConfig] = None) -> MonteCarloReport:
    with use_config(resolve(numerics)):
        return _run_trials(config, numerics)


def _run_trials(config: MonteCarloConfig, numerics: Optional[NumericsConfig]) -> MonteCarloReport:
    Nt, Nxi = event_grid(config, numerics)
    m = config.m
    margin = m * config.constants.q / 2.0 if config.mode == "certified_event" else 0.0
    warnings = _attainability_warnings(config)
    log.info("monte carlo: %s m=%d trials=%d grid=%dx%d (%s)",
             config.spec.label, m, config.trials, Nt, Nxi, config.mode)

    records: List[TrialRecord] = []
    for trial in range(config.trials):
        pts = sample_points(m, config.master_seed, trial)
        gmin, gmax = zak_sum_extrema(config.spec, pts, Nt, Nxi, config.tol, config.workers)
        lower = gmin - margin >= m * config.alpha
        upper = gmax + margin <= m * config.beta
        records.append(TrialRecord(trial, derived_seed(config.master_seed, trial),
                                   gmin / m, gmax / m, lower, upper, lower and upper))

    n = config.trials
    report = MonteCarloReport(
        records=tuple(records),
        empirical_success=sum(r.passed for r in records) / n,
        lower_success=sum(r.lower_pass for r in records) / n,
        upper_success=sum(r.upper_pass for r in records) / n,
        theoretical_floor=1.0 - config.eps,
        config=config,
        grid=(Nt, Nxi),
        warnings=tuple(warnings),
    )
    log.info("monte carlo: success %.4f (lower %.4f, upper %.4f)",
             report.empirical_success, report.lower_success, report.upper_success)
    return report


def doubling_scan(config: MonteCarloConfig, m_start: int, m_max: int,
                  numerics: Optional[NumericsConfig] = None) -> ScanResult:
    """Run at m_start, 2·m_start, … ≤ m_max; stop at the first m reaching 1 - ε."""
    if m_start < 1 or m_max < m_start:
        raise ConfigError(f"scan needs 1 <= m_start <= m_max, got {m_start}, {m_max}")
    reports: List[MonteCarloReport] = []
    m = m_start
    while m <= m_max:
        report = run_trials(replace(config, m=m), numerics)
        reports.append(report)
        if report.empirical_success >= report.theoretical_floor:
            return ScanResult(m, tuple(reports))
        m *= 2
    return ScanResult(None, tuple(reports))


def empirical_expectation_check(spec: WindowSpec, t: float, Nxi: int, M: int, tol: float = 1e-10) -> float:
    """
    max_s | mean_j |Zg(t - j/M, ξ_s)|² - Φ_ĝ(-ξ_s) |: the equispaced average over
    translates against the expectation over a uniform translate.
    """
    if M < 1 or Nxi < 2:
        raise SpecValidationError(f"need M >= 1 and Nxi >= 2, got M={M}, Nxi={Nxi}")
    taus = float(t) - np.arange(M) / M
    Z, _L, _err = zak_rows(spec, taus, Nxi, tol)
    mean = np.mean(Z.real ** 2 + Z.imag ** 2, axis=0)
    phi = np.asarray(periodization_sq(spec, "frequency", Nxi, tol).phi[:Nxi])
    expected = phi[np.mod(-np.arange(Nxi), Nxi)]
    return float(np.max(np.abs(mean - expected)))


# ------------------------------------------------------------------------------
# Internals
# ------------------------------------------------------------------------------
def _attainability_warnings(config: MonteCarloConfig) -> List[str]:
    out: List[str] = []
    c = config.constants
    if c is None:
        return out
    R = c.R
    if R is None:
        try:
            R = periodization_sq(config.spec, "frequency", _PROFILE_GRID, config.tol).max
        except UncertifiableError:
            R = None
    if R is not None and config.beta < R:
        out.append(f"upper event unattainable: beta = {config.beta:g} < R = {R:g}; the t-average of G/m "
                   f"equals the periodization of |ĝ|², whose maximum is R")
    if not lower_event_attainable(c, config.alpha):
        out.append(f"lower event unattainable: alpha = {config.alpha:g} > q = {c.q:g}")
    for w in out:
        log.warning("%s", w)
    return out
