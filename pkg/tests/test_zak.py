import numpy as np
import pytest
from numpy.testing import assert_allclose

from zakframe import (NumericsConfig, SignalGrid, WindowSpec, covariance_defect, inverse_zak, use_config, zak_grid,
                      zak_of_signal, zak_point, zak_switch_defect, zak_unitarity_defect)
from zakframe.errors import ShapeError, SpecValidationError, UncertifiableError
from zakframe.zak import (quasi_periodicity_defect, series_grid, zak_derivative_grids, zak_modulus_bound_defect,
                          zak_rows)

CATALOG = [WindowSpec.indicator(), WindowSpec.gaussian(), WindowSpec.hermite(1),
           WindowSpec.bspline(1), WindowSpec.bspline(2)]


@pytest.mark.parametrize("spec", [WindowSpec.gaussian(), WindowSpec.bspline(1), WindowSpec.bspline(2),
                                  WindowSpec.hermite(1)], ids=lambda s: s.label)
def test_unitarity(spec):
    assert zak_unitarity_defect(spec, 256, 256, 1e-10) <= 1e-6


@pytest.mark.parametrize("spec", [WindowSpec.gaussian(), WindowSpec.bspline(2), WindowSpec.hermite(1)],
                         ids=lambda s: s.label)
def test_switch_identity(spec):
    assert zak_switch_defect(spec, 128, 128, 1e-10) <= 1e-6


@pytest.mark.parametrize("spec", CATALOG, ids=lambda s: s.label)
def test_covariance(spec):
    rng = np.random.default_rng(2024)
    for k, n in rng.integers(-3, 4, size=(10, 2)):
        assert covariance_defect(spec, int(k), int(n), 32, 32) <= 1e-10


def test_covariance_rejects_large_shifts():
    with pytest.raises(SpecValidationError):
        covariance_defect(WindowSpec.gaussian(), 9, 0, 8, 8)


def test_quasi_periodicity():
    d_t, d_xi = quasi_periodicity_defect(WindowSpec.gaussian(), [(0.1, 0.2), (0.7, 0.45), (0.33, 0.9)])
    assert d_t <= 1e-12
    assert d_xi <= 1e-12


def test_gaussian_zak_zero():
    assert abs(zak_point(WindowSpec.gaussian(), 0.0, 0.5, 0.5)) < 1e-12
    # translating moves the zero with it
    assert abs(zak_point(WindowSpec.gaussian(), 0.25, 0.75, 0.5)) < 1e-12


def test_indicator_modulus_is_one():
    Z = zak_grid(WindowSpec.indicator(), 0.3, 16, 16)
    assert_allclose(np.abs(Z.values), 1.0, atol=1e-13)


def test_grid_and_point_agree():
    spec = WindowSpec.bspline(2)
    Z = zak_grid(spec, 0.4, 8, 16)
    assert Z.values[3, 5] == pytest.approx(zak_point(spec, 0.4, 3 / 8, 5 / 16), abs=1e-13)
    assert Z.time_shift == 0.4
    assert Z.t[3] == 3 / 8 and Z.xi[5] == 5 / 16


def test_fft_and_direct_paths_agree():
    spec = WindowSpec.gaussian()
    taus = np.array([0.0, 0.3, -1.7])
    fft, _L, _err = zak_rows(spec, taus, 16, method="fft")
    direct, _L, _err = zak_rows(spec, taus, 16, method="direct")
    assert_allclose(fft, direct, atol=1e-13)


def test_fft_folds_when_grid_is_coarse():
    # bspline:3 needs more terms than 4 frequency columns
    spec = WindowSpec.bspline(3)
    taus = np.array([0.1, 0.6])
    fft, L, _err = zak_rows(spec, taus, 4, method="fft")
    assert 2 * L + 1 > 4
    assert_allclose(fft, series_grid(spec, taus, np.arange(4) / 4), atol=1e-13)


def test_modulus_bound():
    # Σ|β²(t+k)| = 1, so |Z(T_x β²)| ≤ 1
    assert zak_modulus_bound_defect(WindowSpec.bspline(2), 1.0, [0.0, 0.3], 32, 32) <= 1e-12


def test_shape_errors():
    with pytest.raises(ShapeError):
        zak_grid(WindowSpec.gaussian(), 0.0, 1, 8)
    with pytest.raises(ShapeError):
        zak_rows(WindowSpec.gaussian(), [0.0], 1)


def test_signal_zak_inversion():
    rng = np.random.default_rng(5)
    f = SignalGrid(rng.standard_normal(2 * 3 * 8), 8, 3)
    Z = zak_of_signal(f, 8)
    back = inverse_zak(Z, 3)
    assert_allclose(back.samples, f.samples, atol=1e-13)
    # unitary up to the grid weights
    assert np.sum(Z.abs_sq()) / (8 * 8) == pytest.approx(f.energy)


def test_signal_zak_needs_enough_columns():
    f = SignalGrid(np.zeros(2 * 3 * 4), 4, 3)
    with pytest.raises(ShapeError):
        zak_of_signal(f, 4)


def test_signal_grid_validation():
    with pytest.raises(ShapeError):
        SignalGrid(np.zeros(5), 4, 1)
    with pytest.raises(ShapeError):
        SignalGrid(np.array([np.nan] * 8), 4, 1)
    f = SignalGrid.from_function(lambda t: np.exp(-np.pi * t ** 2), 16, 2)
    assert f.t[0] == -2.0
    assert f.padded(4).energy == pytest.approx(f.energy)


def test_derivative_grids_match_difference_quotients():
    g = WindowSpec.gaussian()
    dt, dxi = zak_derivative_grids(g, 8, 8, 1e-12)
    h = 1e-5
    for j, l in [(0, 0), (1, 3), (5, 2), (7, 7)]:
        t, xi = j / 8, l / 8
        num_t = (zak_point(g, 0.0, t + h, xi, 1e-14) - zak_point(g, 0.0, t - h, xi, 1e-14)) / (2 * h)
        num_xi = (zak_point(g, 0.0, t, xi + h, 1e-14) - zak_point(g, 0.0, t, xi - h, 1e-14)) / (2 * h)
        assert abs(dt[j, l] - num_t) < 1e-6
        assert abs(dxi[j, l] - num_xi) < 1e-5


@pytest.mark.parametrize("spec", [WindowSpec.indicator(), WindowSpec.bspline(0)], ids=lambda s: s.label)
def test_switch_defect_needs_summable_transform(spec):
    # |sinc| is not summable, so the frequency-side series has no certified truncation
    with pytest.raises(UncertifiableError):
        zak_switch_defect(spec, 16, 16)


def test_default_tolerance_comes_from_active_config():
    g = WindowSpec.gaussian()
    tight = zak_grid(g, 0.0, 8, 8)
    with use_config(NumericsConfig(zak_tol=1e-3)):
        loose = zak_grid(g, 0.0, 8, 8)
    assert loose.truncation_radius < tight.truncation_radius
    assert tight.truncation_error <= 1e-10 < loose.truncation_error <= 1e-3
