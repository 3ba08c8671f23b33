"""Coupled plasmon modes of the sphere-plane system and their zero-point energy.

Two routes:

* constant contrast factor (perfect conductor, static dielectric): the
  mode matrix ``H = N0 + f_c W`` of each azimuthal block is frequency
  independent, so the squared mode frequencies (in units of the sphere
  plasma frequency) are its eigenvalues;
* lossless Drude plane: ``f_c`` depends on frequency and clearing its
  pole gives the quadratic eigenproblem
  ``lam**2 I - lam (N0 + r/2 I) + (r/2)(N0 - W) = 0``, solved by companion
  linearisation.  Each block then has ``n`` sphere-like and ``n``
  plane-like modes.

Blocks ``m >= 1`` stand for both ``+m`` and ``-m`` and are weighted by two.
All sums run over blocks in order of ``m`` so results do not depend on how
callers schedule the work.
"""
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .coupling import block_orders, coupling_matrix, coupling_matrix_derivative, coupling_ratio
from .errors import ConsistencyError, DomainError, ModeCollapseError, NonRealModeError, NumericalError
from .materials import DrudeLossless, contrast_factor, plasma_ratio

EIG_RESIDUAL_TOL = 1e-10
IMAG_TOL = 1e-8
FD_REL_STEP = 1e-4
FD_MISMATCH_TOL = 1e-4
VALIDITY_FACTOR = 100.0


def isolated_sphere_modes(orders):
    """``n_l0 = l / (2l + 1)``, the squared multipole plasmon frequencies."""
    orders = np.asarray(orders, dtype=float)
    return orders / (2.0 * orders + 1.0)


def block_weight(m):
    return 1 if m == 0 else 2


def mode_count(L):
    """Number of constant-f_c modes up to cutoff ``L`` counting ``+-m``."""
    return L * (L + 2)


def _z(x):
    return 0.5 / x - 1.0 if x > 0 else np.inf


@dataclass(frozen=True)
class SpectralBlock:
    m: int
    L: int
    x: float
    f_c: float
    orders: np.ndarray
    H: np.ndarray
    eigenvalues: Optional[np.ndarray] = None
    eigenvectors: Optional[np.ndarray] = None

    @property
    def reference(self):
        return isolated_sphere_modes(self.orders)


def build_block(m, L, x, f_c):
    """Assemble ``H = diag(n_l0) + f_c W`` for azimuthal block ``m``."""
    w = coupling_matrix(m, L, x)
    H = np.diag(isolated_sphere_modes(w.orders)) + f_c * w.entries
    return SpectralBlock(abs(m), L, float(x), float(f_c), w.orders, H)


def eigen_block(block):
    """Diagonalise a block; returns a copy with ascending eigenpairs filled in."""
    try:
        vals, vecs = np.linalg.eigh(block.H)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}", _z(block.x), block.m, block.L) from exc
    resid = np.linalg.norm(block.H @ vecs - vecs * vals, axis=0)
    scale = max(np.linalg.norm(block.H, 2), np.finfo(float).tiny)
    if np.any(resid > EIG_RESIDUAL_TOL * scale):
        raise NumericalError("eigen-residual above tolerance", _z(block.x), block.m, block.L)
    return replace(block, eigenvalues=vals, eigenvectors=vecs)


def _shift_sum(vals, ref):
    # sum(sqrt(vals)) - sum(sqrt(ref)), pairing sorted lists to limit cancellation
    vals = np.sort(vals)
    ref = np.sort(ref)
    return float(np.sum((vals - ref) / (np.sqrt(vals) + np.sqrt(ref))))


def _check_positive(vals, x, m, L):
    if vals[0] <= 0:
        raise ModeCollapseError(
            f"mode eigenvalue {vals[0]:.3g} <= 0; separation too small for this model",
            _z(x), m, L,
        )


def _constant_energy(x, f_c, L):
    total = 0.0
    for m in range(L + 1):
        block = build_block(m, L, x, f_c)
        vals = np.linalg.eigvalsh(block.H)
        _check_positive(vals, x, m, L)
        total += block_weight(m) * 0.5 * _shift_sum(vals, block.reference)
    return total


def zero_point_energy(z_over_a, f_c, L):
    """Dimensionless interaction energy ``E / (hbar omega_p)`` for constant ``f_c``.

    ``E = 1/2 sum_m weight(m) sum_s [sqrt(n_s) - sqrt(n_l0)]``.
    """
    if L < 1:
        raise DomainError("multipole cutoff L must be >= 1")
    return _constant_energy(coupling_ratio(z_over_a), f_c, L)


def hellmann_feynman_force(z_over_a, f_c, L):
    """Dimensionless force ``a F / (hbar omega_p)`` from analytic eigenvalue slopes."""
    if L < 1:
        raise DomainError("multipole cutoff L must be >= 1")
    x = coupling_ratio(z_over_a)
    total = 0.0
    for m in range(L + 1):
        block = eigen_block(build_block(m, L, x, f_c))
        vals, vecs = block.eigenvalues, block.eigenvectors
        _check_positive(vals, x, m, L)
        dH = f_c * coupling_matrix_derivative(coupling_matrix(m, L, x))
        dn = np.einsum("is,ij,js->s", vecs, dH, vecs)
        total += block_weight(m) * float(np.sum(dn / (2.0 * np.sqrt(vals))))
    return -0.5 * total


def richardson_derivative(func, t, rel_step=FD_REL_STEP):
    """Central difference at steps ``h`` and ``h/2``, Richardson-extrapolated once."""
    h = rel_step * t

    def central(step):
        return (func(t + step) - func(t - step)) / (2.0 * step)

    return (4.0 * central(h / 2) - central(h)) / 3.0


def force_finite_difference(z_over_a, f_c, L, rel_step=FD_REL_STEP):
    return -richardson_derivative(lambda z: zero_point_energy(z, f_c, L), z_over_a, rel_step)


def force(z_over_a, f_c, L, check=True):
    """Dimensionless force, negative when attractive.

    With ``check`` the analytic value is compared to a finite-difference
    derivative of the energy and a :class:`ConsistencyError` is raised when
    they part by more than ``FD_MISMATCH_TOL`` relative.
    """
    hf = hellmann_feynman_force(z_over_a, f_c, L)
    if check:
        fd = force_finite_difference(z_over_a, f_c, L)
        scale = max(abs(hf), abs(fd))
        # energy roundoff grows with the mode count and is amplified by 1/h
        noise = 10.0 * np.finfo(float).eps * mode_count(L) / (FD_REL_STEP * z_over_a)
        if abs(hf - fd) > FD_MISMATCH_TOL * scale + noise:
            raise ConsistencyError(
                f"analytic force {hf:.6g} vs finite difference {fd:.6g}", z_over_a, None, L
            )
    return hf


def mode_frequencies(n_s, material):
    """Damped mode frequencies ``omega_s / omega_p`` and a validity flag.

    ``omega = -i gamma + sqrt(n_s - gamma**2)`` with ``gamma`` the damping
    ratio.  The flag is False when the softest mode is not well above the
    damping floor (``min n_s <= 100 gamma**2``).
    """
    n = np.asarray(n_s, dtype=float)
    g = material.damping_ratio
    omega = -1j * g + np.sqrt((n - g * g).astype(complex))
    valid = bool(np.min(n) > VALIDITY_FACTOR * g * g) if n.size else True
    return omega, valid


# --- lossless Drude plane -------------------------------------------------

def _companion(N0, W, r):
    n = len(N0)
    eye = np.eye(n)
    C = np.diag(N0) + 0.5 * r * eye
    K = 0.5 * r * (np.diag(N0) - W)
    return np.block([[np.zeros((n, n)), eye], [-K, C]])


def dissimilar_reference(m, L, r):
    """Infinite-separation spectrum of a Drude-plane block: ``{n_l0} u {r/2}``."""
    n0 = isolated_sphere_modes(block_orders(m, L))
    return np.sort(np.concatenate([n0, np.full(len(n0), 0.5 * r)]))


def dissimilar_modes(m, L, x, r):
    """All ``2n`` squared mode frequencies of block ``m`` over a Drude plane.

    ``r = (omega_p,plane / omega_p,sphere)**2``; frequencies are in units of the
    sphere plasma frequency.  Returned ascending.
    """
    if not r > 0:
        raise DomainError(f"plasma ratio r must be positive, got {r}")
    if x == 0:
        return dissimilar_reference(m, L, r)
    w = coupling_matrix(m, L, x)
    try:
        vals = np.linalg.eigvals(_companion(isolated_sphere_modes(w.orders), w.entries, r))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}", _z(x), m, L) from exc
    worst = np.max(np.abs(vals.imag))
    if worst > IMAG_TOL:
        raise NonRealModeError(f"mode eigenvalue imaginary part {worst:.3g}", _z(x), m, L)
    vals = np.sort(vals.real)
    _check_positive(vals, x, m, L)
    return vals


def _dissimilar_energy_tilde(x, r, L):
    total = 0.0
    for m in range(L + 1):
        vals = dissimilar_modes(m, L, x, r)
        total += block_weight(m) * 0.5 * _shift_sum(vals, dissimilar_reference(m, L, r))
    return total


@dataclass(frozen=True)
class EnergyResult:
    """Energy and force at one separation.

    ``energy`` and ``force`` are dimensionless, in units of the sphere's
    ``hbar omega_p`` (``force`` is ``a F``).  Physical values are available
    when the plasma energy (and, for the force, the radius) are known.
    """

    z_over_a: float
    L: int
    energy: float
    force: float
    plasma_energy: Optional[float] = None
    radius: Optional[float] = None
    converged: Optional[bool] = None

    @property
    def energy_eV(self):
        return None if self.plasma_energy is None else self.energy * self.plasma_energy

    @property
    def aforce_eV(self):
        return None if self.plasma_energy is None else self.force * self.plasma_energy

    @property
    def force_eV_per_length(self):
        if self.plasma_energy is None or self.radius is None:
            return None
        return self.force * self.plasma_energy / self.radius


def dissimilar_energy(sphere, plane, z_over_a, L, radius=None):
    """Energy and force for a Drude sphere over a Drude plane (lossless).

    The force is a Richardson-extrapolated central difference in ``z/a``.
    """
    if L < 1:
        raise DomainError("multipole cutoff L must be >= 1")
    r = plasma_ratio(sphere, plane)
    energy = _dissimilar_energy_tilde(coupling_ratio(z_over_a), r, L)
    f = -richardson_derivative(
        lambda z: _dissimilar_energy_tilde(coupling_ratio(z), r, L), z_over_a
    )
    return EnergyResult(float(z_over_a), L, energy, f, sphere.plasma_energy, radius)


def energy_and_force(z_over_a, L, plane, sphere=None, radius=None, check=True):
    """Energy and force for any plane model; dispatches on the model type."""
    if isinstance(plane, DrudeLossless):
        if sphere is None:
            raise DomainError("a Drude plane needs the sphere material")
        return dissimilar_energy(sphere, plane.material, z_over_a, L, radius)
    f_c = contrast_factor(plane)
    plasma = None if sphere is None else sphere.plasma_energy
    return EnergyResult(
        float(z_over_a), L,
        zero_point_energy(z_over_a, f_c, L),
        force(z_over_a, f_c, L, check=check),
        plasma, radius,
    )


# --- mode listings --------------------------------------------------------

@dataclass(frozen=True)
class Mode:
    m: int
    weight: int
    index: int
    branch: str
    value: float
    reference: float


@dataclass(frozen=True)
class ModeSet:
    """Every mode eigenvalue at one separation.

    Branch labels come from matching sorted eigenvalues against the sorted
    infinite-separation spectrum.  That is a plotting aid for mode curves,
    nothing downstream depends on it.
    """

    z_over_a: float
    L: int
    modes: list = field(default_factory=list)
    valid: bool = True

    @property
    def values(self):
        return np.array([md.value for md in self.modes])

    @property
    def weights(self):
        return np.array([md.weight for md in self.modes])


def compute_modes(z_over_a, L, plane, sphere=None):
    x = coupling_ratio(z_over_a)
    modes = []
    if isinstance(plane, DrudeLossless):
        if sphere is None:
            raise DomainError("a Drude plane needs the sphere material")
        r = plasma_ratio(sphere, plane.material)
    else:
        f_c = contrast_factor(plane)
    for m in range(L + 1):
        if isinstance(plane, DrudeLossless):
            vals = dissimilar_modes(m, L, x, r)
            n0 = isolated_sphere_modes(block_orders(m, L))
            labelled = sorted([(v, "sphere") for v in n0] + [(0.5 * r, "plane")] * len(n0),
                              key=lambda t: t[0])
        else:
            block = eigen_block(build_block(m, L, x, f_c))
            vals = block.eigenvalues
            _check_positive(vals, x, m, L)
            labelled = [(v, "sphere") for v in np.sort(block.reference)]
        for i, (v, (ref, branch)) in enumerate(zip(vals, labelled)):
            modes.append(Mode(m, block_weight(m), i, branch, float(v), float(ref)))
    valid = True
    if sphere is not None:
        _, valid = mode_frequencies([md.value for md in modes], sphere)
    return ModeSet(float(z_over_a), L, modes, valid)
