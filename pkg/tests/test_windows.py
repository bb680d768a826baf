import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate

from zakframe import (DecayEnvelope, NumericsConfig, WindowSpec, eval_derivative, eval_freq, eval_time, load_config,
                      tail_bound, use_config)
from zakframe.errors import AccuracyError, SpecValidationError, UncertifiableError
from zakframe.windows import bspline_values, envelope, envelope_holds, truncation_radius


def test_bspline_values_hat():
    assert_allclose(bspline_values(1, [0.0, 0.5, 1.0, 1.5, 2.0]), [0.0, 0.5, 1.0, 0.5, 0.0], atol=1e-15)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_bspline_partition_of_unity(n):
    t = np.linspace(0.0, 1.0, 17, endpoint=False)
    total = sum(bspline_values(n, t + k) for k in range(-1, n + 2))
    assert_allclose(total, 1.0, atol=1e-14)


def test_indicator_is_half_open():
    g = WindowSpec.indicator()
    assert_allclose(eval_time(g, [-1e-12, 0.0, 0.999, 1.0]), [0.0, 1.0, 1.0, 0.0])


def test_gaussian_pair():
    g = WindowSpec.gaussian(2.0)
    assert eval_time(g, 0.0) == 1.0
    assert eval_freq(g, 0.0) == pytest.approx(2.0)
    assert eval_freq(g, 0.3) == pytest.approx(2.0 * math.exp(-math.pi * 4 * 0.09))


def test_hermite_one_closed_form():
    h = WindowSpec.hermite(1)
    x = np.array([-0.7, 0.0, 0.3, 1.2])
    assert_allclose(eval_time(h, x), -4 * np.pi * x * np.exp(-np.pi * x ** 2), atol=1e-14)
    # ĥ_n = (-i)^n h_n
    assert_allclose(eval_freq(h, x), -1j * eval_time(h, x), atol=1e-14)


def test_bspline_transform_at_zero():
    for n in range(4):
        assert eval_freq(WindowSpec.bspline(n), 0.0) == pytest.approx(1.0)


@pytest.mark.parametrize("spec", [WindowSpec.gaussian(), WindowSpec.hermite(2), WindowSpec.bspline(2),
                                  WindowSpec.bspline(3)], ids=lambda s: s.label)
def test_derivative_matches_difference_quotient(spec):
    t = np.array([-0.8, 0.37, 1.21, 2.6])
    h = 1e-6
    fd = (eval_time(spec, t + h) - eval_time(spec, t - h)) / (2 * h)
    assert_allclose(eval_derivative(spec, t), fd, atol=1e-6)


def test_totally_positive_two_factor_closed_form():
    # ĝ₀ = 1/((1+2πiξ)(1+πiξ)) inverts to 2(e^{-τ} - e^{-2τ}) for τ > 0; g(t) = g₀(t - 1.5)
    spec = WindowSpec.totally_positive([1.0, 0.5])
    assert spec.shift == pytest.approx(-1.5)
    t = np.array([2.5, 3.0, 4.0])
    tau = t - 1.5
    assert_allclose(eval_time(spec, t), 2 * (np.exp(-tau) - np.exp(-2 * tau)), atol=1e-7)
    assert abs(eval_time(spec, 1.0)) < 1e-7
    assert eval_freq(spec, 0.0) == pytest.approx(1.0)


def test_totally_positive_validation():
    with pytest.raises(SpecValidationError):
        WindowSpec.totally_positive([1.0])              # gamma = 0 needs two factors
    with pytest.raises(SpecValidationError):
        WindowSpec.totally_positive([1.0, 0.0])
    WindowSpec.totally_positive([1.0], gamma=0.5)


def test_spec_validation():
    with pytest.raises(SpecValidationError):
        WindowSpec.gaussian(0.0)
    with pytest.raises(SpecValidationError):
        WindowSpec.bspline(-1)
    with pytest.raises(SpecValidationError):
        WindowSpec.hermite(1.5)
    with pytest.raises(SpecValidationError):
        WindowSpec.sampled([1.0], 0.1)


def test_continuity_flags():
    assert not WindowSpec.indicator().is_continuous
    assert not WindowSpec.bspline(0).is_continuous
    assert WindowSpec.bspline(1).is_continuous
    assert WindowSpec.sampled([0.0, 1.0, 0.0], 0.5).is_continuous
    assert not WindowSpec.sampled([1.0, 1.0], 0.5).is_continuous


def test_compact_truncation_is_exact():
    L, bound = truncation_radius(WindowSpec.bspline(1), "time", 1e-10)
    assert L <= 2
    assert bound == 0.0


def test_gaussian_truncation_meets_tolerance():
    spec = WindowSpec.gaussian()
    L, bound = truncation_radius(spec, "time", 1e-10)
    assert bound <= 1e-10
    assert L < 10
    assert tail_bound(spec, "time", L + 3) <= bound


@pytest.mark.parametrize("spec", [WindowSpec.gaussian(), WindowSpec.hermite(1), WindowSpec.bspline(2)],
                         ids=lambda s: s.label)
@pytest.mark.parametrize("side", ["time", "frequency"])
def test_envelopes_dominate(spec, side):
    assert envelope_holds(spec, side)


def test_sampled_without_envelope_is_uncertifiable():
    spec = WindowSpec.sampled([0.0, 1.0, 0.0], 0.5)
    with pytest.raises(UncertifiableError):
        envelope(spec, "time")


def test_declared_envelope_order():
    env = DecayEnvelope.declared(2.0, 3.0, "frequency")
    assert env.order == 3.0
    assert env.moderate and env.extra_decay
    assert not DecayEnvelope.declared(1.0, 1.5).extra_decay
    with pytest.raises(SpecValidationError):
        DecayEnvelope.declared(1.0, 0.5)


def test_sampled_interpolation_and_transform():
    # hat of width 2 sampled at its knots is exactly β¹
    spec = WindowSpec.sampled([0.0, 1.0, 0.0], 1.0)
    t = np.array([0.25, 0.5, 1.0, 1.75])
    assert_allclose(eval_time(spec, t), bspline_values(1, t), atol=1e-15)
    xi = np.array([0.0, 0.2, 0.5, 1.3])
    assert_allclose(eval_freq(spec, xi), eval_freq(WindowSpec.bspline(1), xi), atol=1e-13)


@pytest.mark.parametrize("n", range(5))
def test_hermite_eigenrelation_by_quadrature(n):
    h = WindowSpec.hermite(n)
    t = np.arange(-8.0, 8.0, 1 / 64)
    g = eval_time(h, t)
    xi = np.array([-1.1, -0.3, 0.0, 0.45, 1.7])
    quad = np.exp(-2j * np.pi * np.outer(xi, t)) @ g / 64
    assert_allclose(eval_freq(h, xi), quad, atol=1e-9 * np.max(np.abs(g)))


# (spec, time interval with kinks, frequency half-width, frequency step)
PARSEVAL_CASES = [
    (WindowSpec.gaussian(), (-10.0, 10.0, None), 10.0, 1 / 16),
    (WindowSpec.gaussian(0.5), (-5.0, 5.0, None), 20.0, 1 / 16),
    (WindowSpec.hermite(3), (-10.0, 10.0, None), 10.0, 1 / 16),
    (WindowSpec.bspline(1), (0.0, 2.0, [1.0]), 2000.0, 1 / 8),
    (WindowSpec.bspline(2), (0.0, 3.0, [1.0, 2.0]), 2000.0, 1 / 8),
    (WindowSpec.totally_positive([0.5, -0.5]), (-40.0, 40.0, [0.0]), 2000.0, 1 / 32),
    (WindowSpec.totally_positive([1.0, 0.5], gamma=0.2), (-38.5, 41.5, [1.5]), 20.0, 1 / 32),
]


@pytest.mark.parametrize("spec,interval,X,h", PARSEVAL_CASES, ids=[c[0].label for c in PARSEVAL_CASES])
def test_parseval_consistency(spec, interval, X, h):
    lo, hi, kinks = interval
    time_energy, _ = integrate.quad(lambda t: float(eval_time(spec, t)) ** 2, lo, hi, points=kinks,
                                    limit=1000, epsabs=1e-14, epsrel=1e-12)
    xi = np.arange(-X, X + h / 2, h)
    freq_energy = float(np.sum(np.abs(eval_freq(spec, xi)) ** 2)) * h
    assert freq_energy == pytest.approx(time_energy, rel=1e-6)


def test_gaussian_time_tail_example():
    assert tail_bound(WindowSpec.gaussian(), "time", 10) <= 1e-15


def test_bspline_frequency_tail_decays_cubically():
    spec = WindowSpec.bspline(1)
    for L in (16, 64):
        bound = tail_bound(spec, "frequency", L, power=2)
        # direct sum of sup |sinc|^4 over each unit cell beyond L
        j = np.arange(L, 10 ** 6, dtype=float)
        assert bound >= 2 * np.sum((np.pi * j) ** -4.0)
    ratio = tail_bound(spec, "frequency", 64, power=2) / tail_bound(spec, "frequency", 128, power=2)
    assert 7.5 < ratio < 8.5


@pytest.mark.parametrize("a", [0.5, 2.0])
def test_two_sided_exponential(a):
    spec = WindowSpec.totally_positive([a, -a])
    t = np.array([-3.0, -0.4, 0.0, 0.25, 1.0, 5.0])
    assert_allclose(eval_time(spec, t), np.exp(-np.abs(t) / a) / (2 * a), atol=1e-12)
    assert eval_time(spec, 0.0) == pytest.approx(1 / (2 * a), abs=1e-12)


@pytest.mark.parametrize("spec", [
    WindowSpec.totally_positive([1.0, 0.5], gamma=0.2),
    WindowSpec.totally_positive([0.8, -0.3, 0.2], gamma=0.05, nu=0.4, c=2.0),
], ids=lambda s: s.label)
def test_totally_positive_matches_inverse_transform(spec):
    # Riemann sum of ∫ ĝ(ξ) e^{2πiξt} dξ; ĝ has Gaussian decay, g exponential decay
    h = 1 / 64
    xi = np.arange(-30.0, 30.0, h)
    t = np.array([-2.0, -0.5, 0.0, 0.7, 1.9, 4.0])
    direct = (np.exp(2j * np.pi * np.outer(t, xi)) @ eval_freq(spec, xi)) * h
    assert_allclose(eval_time(spec, t), direct.real, atol=1e-9)
    assert np.max(np.abs(direct.imag)) < 1e-9


def test_tp_accuracy_comes_from_active_config(tmp_path):
    spec = WindowSpec.totally_positive([0.5, -0.5])
    assert eval_time(spec, 0.3) == pytest.approx(math.exp(-0.6), abs=1e-12)
    p = tmp_path / "strict.json"
    p.write_text('{"tp_accuracy": 1e-30}', encoding="utf-8")
    # no closed form meets 1e-30, and neither does the quadrature fallback
    with use_config(load_config(p)):
        with pytest.raises(AccuracyError):
            eval_time(spec, 0.3)
    assert eval_time(spec, 0.3) == pytest.approx(math.exp(-0.6), abs=1e-12)


def test_truncation_cap_comes_from_active_config():
    spec = WindowSpec.gaussian()
    L, bound = truncation_radius(spec, "time", 1e-14)
    assert L > 2 and bound <= 1e-14
    with use_config(NumericsConfig(max_truncation=2)):
        L_capped, capped = truncation_radius(spec, "time", 1e-14)
    assert L_capped == 2 and capped > 1e-14
