import math

import numpy as np
import pytest

from zakframe import (MonteCarloConfig, WindowSpec, constants_from_values, doubling_scan,
                      empirical_expectation_check, estimate_qR, run_trials, sample_points)
from zakframe.errors import ConfigError, HypothesisViolation
from zakframe.montecarlo import TRIAL_CSV_HEADER, event_grid
from zakframe.rng import derived_seed


@pytest.mark.parametrize("spec", [WindowSpec.bspline(1), WindowSpec.bspline(2)], ids=lambda s: s.label)
@pytest.mark.parametrize("t", [0.1, 0.37])
def test_expectation_identity(spec, t):
    assert empirical_expectation_check(spec, t, 64, 1024) <= 1e-6


@pytest.mark.parametrize("m", [1, 7, 32])
def test_indicator_event_is_certain(m):
    report = run_trials(MonteCarloConfig(spec=WindowSpec.indicator(), m=m, trials=1000, master_seed=17))
    assert report.empirical_success == 1.0
    assert len(report.records) == 1000
    assert all(r.grid_min_over_m == pytest.approx(1.0) for r in report.records[:10])


def test_gaussian_single_translate_always_fails():
    g = WindowSpec.gaussian()
    q = estimate_qR(g, 1024, 1e-10).q.raw
    cfg = MonteCarloConfig(spec=g, m=1, trials=100, alpha=0.01 * q, master_seed=5, Nt=512, Nxi=512)
    report = run_trials(cfg)
    assert report.empirical_success == 0.0
    assert report.lower_success == 0.0
    assert report.grid == (512, 512)


@pytest.mark.slow
def test_theorem_direction(theorem_constants):
    # minutes-scale: 50 trials of 907 translates on the 128x128 certificate grid
    cfg = MonteCarloConfig(spec=WindowSpec.bspline(1), constants=theorem_constants, alpha=1 / 12, beta=1 / 4,
                           eps=0.1, m=907, trials=50, master_seed=2024, mode="certified_event")
    report = run_trials(cfg)
    floor = 0.9 - 3 * math.sqrt(0.9 * 0.1 / 50)
    assert report.grid == (128, 128)
    assert report.lower_success >= floor
    # the t-average of G/m is the periodization (max R = 1 > beta), so the upper event cannot hold
    assert report.upper_success == 0.0
    assert any("upper event unattainable" in w for w in report.warnings)


def test_certified_event_grid(theorem_constants):
    cfg = MonteCarloConfig(spec=WindowSpec.bspline(1), constants=theorem_constants, alpha=1 / 12, beta=1 / 4,
                           mode="certified_event")
    assert event_grid(cfg) == (128, 128)


def test_certified_mode_checks_hypotheses(theorem_constants):
    with pytest.raises(ConfigError):
        MonteCarloConfig(spec=WindowSpec.bspline(1), mode="certified_event")
    with pytest.raises(HypothesisViolation):
        MonteCarloConfig(spec=WindowSpec.bspline(1), constants=theorem_constants, alpha=0.5, beta=1.5,
                         mode="certified_event")


@pytest.mark.parametrize("bad", [{"trials": 0}, {"m": 0}, {"master_seed": -1}, {"mode": "nope"},
                                 {"Nt": 1}, {"eps": 1.5}, {"alpha": 0.0}])
def test_config_validation(bad):
    with pytest.raises(ConfigError):
        MonteCarloConfig(spec=WindowSpec.gaussian(), **bad)


def test_runs_are_reproducible():
    cfg = MonteCarloConfig(spec=WindowSpec.bspline(2), m=4, trials=5, master_seed=99, Nt=32, Nxi=32,
                           alpha=0.05, beta=1.0)
    a, b = run_trials(cfg), run_trials(cfg)
    assert a.to_dict() == b.to_dict()
    assert [r.seed for r in a.records] == [derived_seed(99, i) for i in range(5)]
    assert sample_points(4, 99, 2).points == sample_points(4, 99, 2).points


def test_trial_records():
    report = run_trials(MonteCarloConfig(spec=WindowSpec.bspline(2), m=2, trials=3, Nt=16, Nxi=16))
    row = report.records[0].csv_row()
    assert len(row) == len(TRIAL_CSV_HEADER)
    r = report.records[0]
    assert r.passed == (r.lower_pass and r.upper_pass)
    assert report.theoretical_floor == pytest.approx(0.9)


def test_doubling_scan_stops_at_first_success():
    cfg = MonteCarloConfig(spec=WindowSpec.indicator(), trials=10)
    scan = doubling_scan(cfg, 1, 16)
    assert scan.m_found == 1
    assert len(scan.reports) == 1


def test_doubling_scan_exhausts():
    # alpha above q: the lower event never holds
    cfg = MonteCarloConfig(spec=WindowSpec.bspline(1), trials=2, alpha=0.9, beta=5.0, Nt=16, Nxi=16)
    scan = doubling_scan(cfg, 1, 4)
    assert scan.m_found is None
    assert [r.config.m for r in scan.reports] == [1, 2, 4]
    with pytest.raises(ConfigError):
        doubling_scan(cfg, 4, 2)


def test_unattainable_lower_event_is_reported():
    wc = constants_from_values(1.0, 1 / 3, 10.0, R=1.0)
    report = run_trials(MonteCarloConfig(spec=WindowSpec.bspline(1), constants=wc, alpha=0.5, trials=1,
                                         Nt=8, Nxi=8))
    assert any("lower event unattainable" in w for w in report.warnings)


def test_grid_minimum_concentrates_at_q():
    spec = WindowSpec.bspline(2)
    q = estimate_qR(spec, 1024, 1e-10).q.raw
    spread = []
    for m in (16, 64, 256):
        report = run_trials(MonteCarloConfig(spec=spec, m=m, trials=15, master_seed=11, Nt=32, Nxi=32,
                                             alpha=0.01, beta=5.0))
        spread.append(float(np.median([abs(r.grid_min_over_m - q) for r in report.records])))
    assert spread[0] >= spread[1] >= spread[2]


@pytest.mark.parametrize("m", [1, 5, 40])
def test_grid_minimum_never_exceeds_R(m):
    spec = WindowSpec.bspline(2)
    R = estimate_qR(spec, 1024, 1e-10).R.raw
    report = run_trials(MonteCarloConfig(spec=spec, m=m, trials=20, master_seed=m, Nt=32, Nxi=32,
                                         alpha=0.01, beta=5.0))
    assert all(r.grid_min_over_m <= R + 1e-9 for r in report.records)
