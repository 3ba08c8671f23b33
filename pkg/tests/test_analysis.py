import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sphereplane.analysis import (
    SweepResult, asymptotic_delta, asymptotic_prefactor, convergence_scan, dissimilar_difference,
    loglog_slope, make_grid, relative_difference, required_L, sweep, truncation_difference,
)
from sphereplane.errors import DomainError
from sphereplane.materials import DrudeLossless, Material, PerfectConductor
from sphereplane.spectral import force, zero_point_energy

AU = Material("Au", 8.55, 0.0126)
AL = Material("Al", 15.8, 0.04)


def test_grid():
    g = make_grid(0.1, 10, 5)
    np.testing.assert_allclose(g, [0.1, 0.316227766, 1, 3.16227766, 10], rtol=1e-9)
    assert list(make_grid(1, 3, 3, log=False)) == [1, 2, 3]
    assert list(make_grid(2.0, 2.0, 1)) == [2.0]
    with pytest.raises(DomainError):
        make_grid(0, 1, 3)
    with pytest.raises(DomainError):
        make_grid(1, 1, 3)


def test_sweep_matches_direct_calls():
    grid = make_grid(0.2, 5, 4)
    res = sweep(grid, 6)
    for z, e, f in zip(grid, res.energy, res.force):
        assert e == zero_point_energy(z, -1.0, 6)
        assert f == force(z, -1.0, 6)
    assert list(res.L) == [6] * 4


def test_sweep_threads_bit_identical():
    grid = make_grid(0.1, 10, 12)
    a = sweep(grid, 15, workers=1)
    b = sweep(grid, 15, workers=4)
    assert np.array_equal(a.energy, b.energy) and np.array_equal(a.force, b.force)


def test_sweep_auto_L():
    res = sweep([0.5, 5.0], auto_L=True, tol=1e-6)
    assert res.L[0] > res.L[1] >= 2
    with pytest.raises(DomainError):
        sweep([1.0], auto_L=True, plane=DrudeLossless(AU), sphere=AU)


def test_sweep_result_validation():
    with pytest.raises(DomainError):
        SweepResult(np.array([1.0, 0.5]), np.zeros(2), np.zeros(2), np.ones(2))
    with pytest.raises(DomainError):
        SweepResult(np.array([1.0, 2.0]), np.array([0.0, np.nan]), np.zeros(2), np.ones(2))


def test_truncation_same_cutoff_is_zero():
    assert np.all(truncation_difference(5, 5, [0.3, 1.0]) == 0)
    with pytest.raises(DomainError):
        truncation_difference(2, 3, [1.0])


def test_truncation_decreases_with_distance():
    d = truncation_difference(20, 1, make_grid(0.2, 10, 10))
    assert np.all(d >= 0)
    assert np.all(np.diff(d) < 0)


def test_quadrupole_vs_dipole_at_five_radii():
    # "even at z = 5a there are differences ... of about 5%"
    gap = truncation_difference(2, 1, [5.0])[0]
    assert gap == pytest.approx(0.05, abs=0.02)


def test_required_L_behaviour():
    L, capped, e = required_L(0.1, 1e-6, 120)
    assert 60 <= L <= 100 and not capped
    assert e == pytest.approx(zero_point_energy(0.1, -1.0, L), rel=1e-12)
    L, capped, _ = required_L(0.1, 1e-12, 10)
    assert capped and L == 10
    with pytest.raises(DomainError):
        required_L(1.0, 0.0)


def test_convergence_scan_shapes():
    res = convergence_scan([0.2, 2.0, 8.0], 1e-4, 60)
    assert np.all(np.diff(res.L) <= 0)
    assert not res.capped.any()


def test_dissimilar_null():
    res = dissimilar_difference(AU, AU, [0.3, 3.0], 4)
    assert np.all(res.delta_energy == 0) and np.all(res.delta_force == 0)


def test_dissimilar_symmetric_in_materials():
    grid = [0.4, 2.0]
    ab = dissimilar_difference(AL, AU, grid, 6)
    ba = dissimilar_difference(AU, AL, grid, 6)
    np.testing.assert_allclose(ab.delta_energy, ba.delta_energy, rtol=1e-14)
    np.testing.assert_allclose(ab.delta_force, ba.delta_force, rtol=1e-14)
    assert np.all((ab.delta_force >= 0) & (ab.delta_force <= 2))


def test_relative_difference():
    assert relative_difference(0.0, 0.0) == 0
    assert relative_difference(3.0, 1.0) == 1.0


def test_asymptotic_delta():
    assert asymptotic_prefactor() == pytest.approx(
        2 * (1 / math.sqrt(3) - 1 / math.sqrt(2)) / (1 / math.sqrt(3) + 1 / math.sqrt(2)))
    assert round(abs(asymptotic_prefactor()), 4) == 0.2020
    assert asymptotic_delta(15.8, 8.55) == pytest.approx(0.0601, abs=5e-4)
    assert asymptotic_delta(15.8, 8.55) == pytest.approx(0.060155953153504520, rel=1e-13)
    assert asymptotic_delta(5.0, 5.0) == 0


@given(st.floats(0.1, 50), st.floats(0.1, 50), st.floats(0.01, 100))
def test_asymptotic_scale_invariant(a, b, s):
    assert asymptotic_delta(a * s, b * s) == pytest.approx(asymptotic_delta(a, b), abs=1e-14)


def test_fig4_approaches_asymptote_from_below():
    grid = make_grid(2, 10, 5)
    res = dissimilar_difference(AL, AU, grid, 10)
    target = asymptotic_delta(15.8, 8.55)
    assert np.all(res.delta_energy < target)
    assert np.all(np.abs(res.delta_energy - target) < 0.015)
    assert np.all(np.diff(res.delta_energy) > 0)


def test_loglog_slope():
    z = np.geomspace(0.5, 50, 9)
    assert loglog_slope(z, -3.0 / z**2) == pytest.approx(-2, abs=1e-12)
    assert loglog_slope(z, z**3, window=(2, 7)) == pytest.approx(3, abs=1e-12)
    with pytest.raises(DomainError):
        loglog_slope(z, np.linspace(-1, 1, 9))
    with pytest.raises(DomainError):
        loglog_slope(z[:2], z[:2])
