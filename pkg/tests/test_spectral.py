import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from sphereplane.coupling import coupling_coefficient, coupling_matrix, coupling_ratio
from sphereplane.errors import DomainError, ModeCollapseError
from sphereplane.materials import DrudeLossless, Material, PerfectConductor, StaticDielectric
from sphereplane.spectral import (
    build_block, compute_modes, dissimilar_energy, dissimilar_modes, dissimilar_reference,
    eigen_block, energy_and_force, force, force_finite_difference, hellmann_feynman_force,
    isolated_sphere_modes, mode_count, mode_frequencies, zero_point_energy,
)

AU = Material("Au", 8.55, 0.0126)
AL = Material("Al", 15.8, 0.04)


def dipolar_energy_mp(z, f_c=-1):
    """Three dipolar modes, m = 0 once and m = +-1 twice."""
    z = mpmath.mpf(z)
    k = (1 / (2 * (1 + z))) ** 3
    third = mpmath.mpf(1) / 3
    return (mpmath.sqrt(third + 2 * f_c * k / 3) - mpmath.sqrt(third)
            + 2 * (mpmath.sqrt(third + f_c * k / 3) - mpmath.sqrt(third))) / 2


def test_dipolar_blocks():
    x, fc = 0.3, -0.7
    assert build_block(0, 1, x, fc).H[0, 0] == pytest.approx(1 / 3 + 2 / 3 * fc * x**3, rel=1e-15)
    assert build_block(1, 1, x, fc).H[0, 0] == pytest.approx(1 / 3 + 1 / 3 * fc * x**3, rel=1e-15)


def test_null_contrast_is_diagonal():
    b = build_block(0, 6, 0.4, 0.0)
    assert np.array_equal(b.H, np.diag(np.arange(1, 7) / (2 * np.arange(1, 7) + 1)))
    vals = eigen_block(b).eigenvalues
    np.testing.assert_allclose(vals, [1 / 3, 2 / 5, 3 / 7, 4 / 9, 5 / 11, 6 / 13], rtol=1e-15)


def test_two_by_two_characteristic_polynomial():
    x, fc = 0.25, -1.0
    a = 1 / 3 + fc * 2 / 3 * x**3
    b = fc * math.sqrt(2) * x**4 * math.sqrt(36 / 60)
    d = 2 / 5 + fc * 2 * x**5 * 1.2
    mean, half = (a + d) / 2, math.hypot((a - d) / 2, b)
    vals = eigen_block(build_block(0, 2, x, fc)).eigenvalues
    np.testing.assert_allclose(vals, [mean - half, mean + half], rtol=1e-14)
    # entries themselves from the coefficient formula
    assert coupling_coefficient(2, 2, 0) == pytest.approx(1.2)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 15), st.floats(0.05, 0.45), st.floats(-1.0, 0.0))
def test_eigen_residual_and_orthonormality(m, x, fc):
    blk = eigen_block(build_block(m, 15, x, fc))
    H, v, n = blk.H, blk.eigenvectors, blk.eigenvalues
    assert np.all(np.linalg.norm(H @ v - v * n, axis=0) <= 1e-10 * np.linalg.norm(H, 2))
    np.testing.assert_allclose(v.T @ v, np.eye(len(n)), atol=1e-12)
    assert np.all(np.diff(n) >= 0)


def test_mode_frequencies():
    lossless = Material("L", 5.0, 0.0)
    om, valid = mode_frequencies([1 / 3, 1 / 2], lossless)
    np.testing.assert_allclose(om, [1 / math.sqrt(3), 1 / math.sqrt(2)], rtol=1e-15)
    assert valid
    om, valid = mode_frequencies([1 / 3], AU)
    assert om[0] == pytest.approx(-0.0126j + math.sqrt(1 / 3 - 0.0126**2), rel=1e-15)
    assert valid
    _, valid = mode_frequencies([0.01, 0.3], AU)  # 0.01 < 100 * 0.0126**2
    assert not valid


def test_energy_null_plane():
    for L in (1, 5, 30):
        assert zero_point_energy(0.3, 0.0, L) == 0.0
        assert force(0.3, 0.0, L) == 0.0


@pytest.mark.parametrize("z", [0.1, 1.0, 5.0])
def test_dipolar_energy_closed_form(z):
    assert zero_point_energy(z, -1.0, 1) == pytest.approx(float(dipolar_energy_mp(z)), rel=1e-12)


@pytest.mark.parametrize("z", [0.1, 1.0, 5.0])
def test_dipolar_force_closed_form(z):
    with mpmath.workdps(30):
        expected = -mpmath.diff(dipolar_energy_mp, mpmath.mpf(z))
    assert force(z, -1.0, 1) == pytest.approx(float(expected), rel=1e-10)


def test_dipolar_force_slope_far_away():
    z1, z2 = 1000.0, 1100.0
    slope = math.log(force(z2, -1.0, 1) / force(z1, -1.0, 1)) / math.log(z2 / z1)
    assert slope == pytest.approx(-4, abs=0.01)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.1, 10.0), st.sampled_from([-1.0, -0.5, -0.1]), st.integers(1, 12))
def test_hellmann_feynman_matches_finite_difference(z, fc, L):
    hf = hellmann_feynman_force(z, fc, L)
    fd = force_finite_difference(z, fc, L)
    assert hf == pytest.approx(fd, rel=1e-6)


def test_energy_and_force_signs_and_monotone():
    zs = np.geomspace(0.1, 20, 25)
    E = np.array([zero_point_energy(z, -1.0, 20) for z in zs])
    F = np.array([force(z, -1.0, 20) for z in zs])
    assert np.all(E < 0) and np.all(F < 0)
    assert np.all(np.diff(E) > 0)
    assert abs(zero_point_energy(1e4, -1.0, 20)) < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10), st.floats(0.1, 5.0), st.floats(1.01, 3.0))
def test_red_shift(m, z, factor):
    L = 10
    near = eigen_block(build_block(m, L, coupling_ratio(z), -1.0)).eigenvalues
    far = eigen_block(build_block(m, L, coupling_ratio(z * factor), -1.0)).eigenvalues
    free = np.sort(isolated_sphere_modes(range(max(1, m), L + 1)))
    assert np.all(near <= far + 1e-15)
    assert np.all(far <= free + 1e-15)


def test_convergence_in_cutoff_is_monotone():
    for z in (0.1, 0.5, 2.0):
        E = {L: zero_point_energy(z, -1.0, L) for L in range(10, 91, 10)}
        gaps = [abs(E[L] - E[L - 10]) / abs(E[L]) for L in range(20, 91, 10)]
        # strictly decreasing until the gap reaches the roundoff floor
        above = [g for g in gaps if g > 1e-10]
        assert len(above) >= 1
        assert all(b < a for a, b in zip(above, above[1:]))
        assert gaps.index(above[-1]) == len(above) - 1


def test_mode_count():
    for L in (1, 4, 9):
        ms = compute_modes(1.0, L, PerfectConductor())
        assert int(ms.weights.sum()) == mode_count(L) == L * (L + 2)
        md = compute_modes(1.0, L, DrudeLossless(AL), sphere=AU)
        assert int(md.weights.sum()) == 2 * L * (L + 2)


def test_mode_collapse_reported():
    # strongly negative contrast (eps_p = -1.2) squeezes modes through zero near contact
    fc = (1 + 1.2) / (1 - 1.2)
    with pytest.raises(ModeCollapseError) as info:
        zero_point_energy(0.01, fc, 30)
    assert info.value.L == 30 and info.value.m is not None


def test_cutoff_domain():
    with pytest.raises(DomainError):
        zero_point_energy(1.0, -1.0, 0)


# --- Drude plane ----------------------------------------------------------

@pytest.mark.parametrize("r", [0.3, 1.0, 3.4])
def test_dissimilar_decoupled_spectrum(r):
    vals = dissimilar_modes(2, 6, 0.0, r)
    expected = np.sort(np.concatenate([isolated_sphere_modes(range(2, 7)), np.full(5, r / 2)]))
    np.testing.assert_array_equal(vals, expected)
    np.testing.assert_allclose(dissimilar_modes(2, 6, 1e-9, r), expected, rtol=1e-12)


def test_dissimilar_same_material_far_limit():
    vals = dissimilar_modes(0, 1, 1e-4, 1.0)
    np.testing.assert_allclose(np.sqrt(vals), [1 / math.sqrt(3), 1 / math.sqrt(2)], rtol=1e-10)


def qep_det(lam, m, L, x, r):
    w = coupling_matrix(m, L, x).entries
    n0 = np.diag(isolated_sphere_modes(range(max(1, m), L + 1)))
    n = len(w)
    return np.linalg.det(lam**2 * np.eye(n) - lam * (n0 + r / 2 * np.eye(n)) + r / 2 * (n0 - w))


def bracketed_roots(func, lo, hi, samples=20000):
    grid = np.linspace(lo, hi, samples)
    vals = [func(t) for t in grid]
    roots = []
    for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]):
        if fa == 0:
            roots.append(a)
        elif fa * fb < 0:
            roots.append(brentq(func, a, b, xtol=1e-15, rtol=1e-15))
    return roots


@pytest.mark.parametrize("m,L,z,r", [(0, 1, 0.5, 1.0), (1, 1, 0.2, 1.0), (0, 3, 0.5, 1.0), (1, 3, 1.0, 0.29), (2, 4, 0.3, 3.4)])
def test_dissimilar_against_determinant_bisection(m, L, z, r):
    x = coupling_ratio(z)
    vals = dissimilar_modes(m, L, x, r)
    roots = bracketed_roots(lambda t: qep_det(t, m, L, x, r), 1e-3, 2.5)
    assert len(roots) == len(vals)
    np.testing.assert_allclose(vals, roots, rtol=1e-9)


def test_dissimilar_sphere_branch_self_consistent():
    # r = 1, L = 1: the sphere root satisfies n = 1/3 + c f_c(n) x^3 / 3
    x = coupling_ratio(0.4)
    for m, c in ((0, 2), (1, 1)):
        lam = dissimilar_modes(m, 1, x, 1.0)[0]
        fc = 1.0 / (2 * lam - 1.0)
        assert lam == pytest.approx(1 / 3 + c * fc * x**3 / 3, rel=1e-12)
        root = brentq(lambda t: -t + 1 / 3 + c * x**3 / (3 * (2 * t - 1)), 0.2, 0.49, xtol=1e-16)
        assert lam == pytest.approx(root, rel=1e-12)


def test_dissimilar_same_material_symmetric():
    a = dissimilar_energy(AU, AU, 2.0, 6)
    b = energy_and_force(2.0, 6, DrudeLossless(AU), sphere=AU)
    assert a.energy == b.energy and a.force == b.force
    assert a.energy < 0 and a.force < 0


def test_dissimilar_swap_differs():
    ab = dissimilar_energy(AL, AU, 3.0, 2)
    ba = dissimilar_energy(AU, AL, 3.0, 2)
    assert abs(ab.energy_eV - ba.energy_eV) > 1e-3 * abs(ab.energy_eV)
    delta = 2 * abs((ab.energy_eV - ba.energy_eV) / (ab.energy_eV + ba.energy_eV))
    assert delta == pytest.approx(0.06, abs=0.01)


def test_dissimilar_far_limit_vanishes():
    assert abs(dissimilar_energy(AL, AU, 1e4, 4).energy) < 1e-12


def test_energy_result_units():
    res = energy_and_force(1.0, 4, PerfectConductor(), sphere=AU, radius=50.0)
    assert res.energy_eV == pytest.approx(res.energy * 8.55)
    assert res.force_eV_per_length == pytest.approx(res.force * 8.55 / 50.0)
    assert energy_and_force(1.0, 4, StaticDielectric(1.0)).energy_eV is None


def test_mode_labels_track_branches():
    ms = compute_modes(5.0, 3, DrudeLossless(AU), sphere=AU)
    for md in ms.modes:
        expected = 0.5 if md.branch == "plane" else md.reference
        assert md.reference == pytest.approx(expected)
        assert md.value == pytest.approx(md.reference, abs=5e-3)


def test_energy_gap_dipolar_vs_converged_at_five_radii():
    # quoted as about 5 %, treated as a +-2 point band
    e80 = zero_point_energy(5.0, -1.0, 80)
    e1 = zero_point_energy(5.0, -1.0, 1)
    assert abs(e80 - e1) / abs(e80) == pytest.approx(0.05, abs=0.02)
