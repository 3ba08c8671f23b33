"""Sweeps and derived studies built on the spectral solvers."""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .coupling import coupling_ratio
from .errors import DomainError
from .materials import DrudeLossless, PerfectConductor, contrast_factor
from .spectral import (
    _constant_energy, _shift_sum, block_weight, build_block, energy_and_force,
    dissimilar_energy, force,
)

AUTO_L_TOL = 1e-6
AUTO_L_MAX = 120


def make_grid(zmin, zmax, points, log=True):
    """Strictly increasing ``z/a`` grid."""
    if not zmin > 0:
        raise DomainError("grid minimum must be positive")
    if points < 1:
        raise DomainError("grid needs at least one point")
    if points == 1:
        return np.array([float(zmin)])
    if not zmax > zmin:
        raise DomainError("grid maximum must exceed the minimum")
    if log:
        return np.geomspace(zmin, zmax, points)
    return np.linspace(zmin, zmax, points)


def _map(func, items, workers):
    items = list(items)
    if workers is None or workers <= 1 or len(items) <= 1:
        return [func(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


@dataclass
class SweepResult:
    """Energy and force over a ``z/a`` grid.

    ``energy``/``force`` are dimensionless (sphere ``hbar omega_p`` units).
    """

    z_over_a: np.ndarray
    energy: np.ndarray
    force: np.ndarray
    L: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        z = np.asarray(self.z_over_a)
        if z.size > 1 and np.any(np.diff(z) <= 0):
            raise DomainError("sweep grid must be strictly increasing")
        for name in ("energy", "force"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise DomainError(f"non-finite {name} in sweep")


def sweep(grid, L=None, plane=PerfectConductor(), sphere=None, auto_L=False,
          tol=AUTO_L_TOL, L_max=AUTO_L_MAX, workers=1):
    """Energy and force on every grid point.

    With ``auto_L`` each point uses the cutoff returned by
    :func:`convergence_scan` (constant-f_c planes only).
    """
    grid = np.asarray(grid, dtype=float)
    if auto_L:
        if isinstance(plane, DrudeLossless):
            raise DomainError("automatic L is only available for constant-f_c planes")
        Ls = convergence_scan(grid, tol, L_max, contrast_factor(plane), workers=workers).L
    else:
        if L is None or L < 1:
            raise DomainError("explicit L must be >= 1")
        Ls = np.full(len(grid), L)

    def point(args):
        z, Lz = args
        return energy_and_force(z, int(Lz), plane, sphere)

    results = _map(point, zip(grid, Ls), workers)
    meta = {"plane": plane, "sphere": sphere, "auto_L": auto_L, "tol": tol if auto_L else None}
    return SweepResult(
        grid,
        np.array([r.energy for r in results]),
        np.array([r.force for r in results]),
        np.array([r.L for r in results], dtype=int),
        meta,
    )


def truncation_difference(LH, LW, grid, f_c=-1.0, workers=1):
    """``|(F^LH - F^LW) / F^LH|`` on each grid point."""
    if LW < 1 or LH < LW:
        raise DomainError("need LH >= LW >= 1")
    grid = np.asarray(grid, dtype=float)
    if LH == LW:
        return np.zeros(len(grid))

    def point(z):
        hi = force(z, f_c, LH)
        lo = force(z, f_c, LW)
        return abs((hi - lo) / hi)

    return np.array(_map(point, grid, workers))


@dataclass
class ConvergenceResult:
    z_over_a: np.ndarray
    L: np.ndarray
    capped: np.ndarray
    energy: np.ndarray


def _energy_ladder(x, f_c, L_max):
    """Yield ``(L, E_L)`` for ``L = 1, 2, ...`` reusing the ``L_max`` blocks.

    Block ``m`` at cutoff ``L`` is the leading submatrix of block ``m`` at
    ``L_max``.
    """
    blocks = {}
    for L in range(1, L_max + 1):
        total = 0.0
        for m in range(L + 1):
            if m not in blocks:
                blocks[m] = build_block(m, L_max, x, f_c)
            b = blocks[m]
            n = L - max(1, m) + 1
            vals = np.linalg.eigvalsh(b.H[:n, :n])
            if vals[0] <= 0:
                # defer to the full solver for the proper error with context
                _constant_energy(x, f_c, L)
            total += block_weight(m) * 0.5 * _shift_sum(vals, b.reference[:n])
        yield L, total


def required_L(z_over_a, tol=AUTO_L_TOL, L_max=AUTO_L_MAX, f_c=-1.0):
    """Smallest ``L >= 2`` with ``|E_L - E_{L-1}| / |E_L| < tol``.

    Returns ``(L, capped, E_L)``; ``capped`` is True when ``L_max`` was hit
    before the tolerance was met.
    """
    if not tol > 0:
        raise DomainError("tolerance must be positive")
    if L_max < 2:
        raise DomainError("L_max must be >= 2")
    x = coupling_ratio(z_over_a)
    prev = None
    for L, e in _energy_ladder(x, f_c, L_max):
        if prev is not None:
            if e == 0.0:
                return L, False, e
            if abs(e - prev) / abs(e) < tol:
                return L, False, e
        prev = e
    return L_max, True, prev


def convergence_scan(grid, tol=AUTO_L_TOL, L_max=AUTO_L_MAX, f_c=-1.0, workers=1):
    grid = np.asarray(grid, dtype=float)
    rows = _map(lambda z: required_L(z, tol, L_max, f_c), grid, workers)
    return ConvergenceResult(
        grid,
        np.array([r[0] for r in rows], dtype=int),
        np.array([r[1] for r in rows], dtype=bool),
        np.array([r[2] for r in rows]),
    )


@dataclass
class DissimilarResult:
    """Swap study: sphere A over plane B versus sphere B over plane A.

    Energies are in eV; forces are ``a F`` in eV.
    """

    z_over_a: np.ndarray
    energy_ab: np.ndarray
    energy_ba: np.ndarray
    force_ab: np.ndarray
    force_ba: np.ndarray
    L: int

    @property
    def delta_energy(self):
        return relative_difference(self.energy_ab, self.energy_ba)

    @property
    def delta_force(self):
        return relative_difference(self.force_ab, self.force_ba)


def relative_difference(p, q):
    """``2 |(p - q) / (p + q)|``, zero where both vanish."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    s = p + q
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(s == 0, 0.0, 2.0 * np.abs((p - q) / np.where(s == 0, 1.0, s)))
    return out


def dissimilar_difference(mat_a, mat_b, grid, L, workers=1):
    grid = np.asarray(grid, dtype=float)

    def point(z):
        ab = dissimilar_energy(mat_a, mat_b, z, L)
        ba = dissimilar_energy(mat_b, mat_a, z, L)
        return ab.energy_eV, ba.energy_eV, ab.aforce_eV, ba.aforce_eV

    rows = np.array(_map(point, grid, workers)).reshape(len(grid), 4)
    return DissimilarResult(grid, rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3], L)


def asymptotic_prefactor():
    s3, s2 = 1.0 / math.sqrt(3.0), 1.0 / math.sqrt(2.0)
    return 2.0 * (s3 - s2) / (s3 + s2)


def asymptotic_delta(plasma_a, plasma_b):
    """Large-separation swap difference for two Drude metals.

    Treats each configuration as one sphere plasmon at ``omega_p/sqrt(3)``
    plus one plane plasmon at ``omega_p/sqrt(2)``.
    """
    if not (plasma_a > 0 and plasma_b > 0):
        raise DomainError("plasma energies must be positive")
    return abs(asymptotic_prefactor()) * abs(plasma_a - plasma_b) / (plasma_a + plasma_b)


def loglog_slope(z_over_a, values, window=None):
    """Least-squares slope of ``ln|values|`` against ``ln(z/a)``.

    ``window`` is an optional ``(start, stop)`` index range or slice.
    """
    z = np.asarray(z_over_a, dtype=float)
    v = np.asarray(values, dtype=float)
    if window is not None:
        sl = window if isinstance(window, slice) else slice(*window)
        z, v = z[sl], v[sl]
    if len(z) < 3:
        raise DomainError("slope fit needs at least 3 points")
    if not (np.all(v > 0) or np.all(v < 0)):
        raise DomainError("values change sign (or vanish) inside the fit window")
    slope, _ = np.polyfit(np.log(z), np.log(np.abs(v)), 1)
    return float(slope)
