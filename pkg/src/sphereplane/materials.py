"""Drude dielectric response, the spectral variable and substrate contrast.

Frequencies are always passed as ratios to the plasma frequency of the
material in question (``omega_ratio = omega / omega_p``).  The contrast
factor of a Drude plane is parameterised by ``lam = omega**2 / omega_ps**2``
where ``omega_ps`` is the plasma frequency of the *sphere*, which turns the
dissimilar-material mode condition into a polynomial eigenproblem.
"""
import os
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Union

import numpy as np

from .errors import DomainError, MaterialsError, PoleError

MATERIALS_ENV = "SPHEREPLANE_MATERIALS"

# the mode formulas drop damping; they assume (tau omega_p)^-1 << 1
DAMPING_WARN_THRESHOLD = 0.1


@dataclass(frozen=True)
class Material:
    """A lossy Drude metal.

    Attributes
    ----------
    name : str
    plasma_energy : float
        hbar * omega_p in eV.
    damping_ratio : float
        (tau * omega_p)^-1, dimensionless.
    """

    name: str
    plasma_energy: float
    damping_ratio: float = 0.0

    def __post_init__(self):
        if not self.plasma_energy > 0:
            raise DomainError(f"{self.name}: plasma energy must be positive, got {self.plasma_energy}")
        if not self.damping_ratio >= 0:
            raise DomainError(f"{self.name}: damping ratio must be non-negative, got {self.damping_ratio}")
        if self.damping_ratio >= DAMPING_WARN_THRESHOLD:
            warnings.warn(
                f"{self.name}: damping ratio {self.damping_ratio} is not small; "
                "lossless mode formulas lose accuracy",
                stacklevel=2,
            )


@dataclass(frozen=True)
class PerfectConductor:
    pass


@dataclass(frozen=True)
class StaticDielectric:
    eps: float

    def __post_init__(self):
        if -1.0 < self.eps < 1.0:
            raise DomainError(f"static plane permittivity must satisfy |eps| >= 1, got {self.eps}")


@dataclass(frozen=True)
class DrudeLossless:
    material: Material


PlaneModel = Union[PerfectConductor, StaticDielectric, DrudeLossless]


def _check_omega(omega_ratio):
    w = np.asarray(omega_ratio, dtype=float)
    if np.any(w <= 0):
        raise DomainError("omega/omega_p must be positive")
    return w


def drude_epsilon(material, omega_ratio, lossless=False):
    """Drude permittivity ``1 - 1/(w (w + i gamma))`` at ``w = omega/omega_p``."""
    w = _check_omega(omega_ratio)
    gamma = 0.0 if lossless else material.damping_ratio
    eps = 1.0 - 1.0 / (w * (w + 1j * gamma))
    return eps[()] if eps.ndim == 0 else eps


def spectral_u(material, omega_ratio, lossless=False):
    """Spectral variable ``u = 1/(1 - eps)``.

    For the Drude model this is ``w (w + i gamma)``; lossless it is simply
    ``w**2``.
    """
    w = _check_omega(omega_ratio)
    gamma = 0.0 if lossless else material.damping_ratio
    u = w * (w + 1j * gamma)
    return u[()] if u.ndim == 0 else u


def plasma_ratio(sphere, plane):
    """``(omega_p,plane / omega_p,sphere)**2``."""
    return (plane.plasma_energy / sphere.plasma_energy) ** 2


def drude_contrast_factor(lam, r):
    """Contrast factor of a lossless Drude plane, ``r / (2 lam - r)``.

    ``lam`` is the squared frequency in units of the sphere plasma
    frequency and ``r`` the squared ratio of plasma frequencies.
    """
    lam = np.asarray(lam, dtype=float)
    denom = 2.0 * lam - r
    if np.any(denom == 0):
        raise PoleError(f"contrast factor pole at lambda = r/2 = {r / 2}")
    out = r / denom
    return out[()] if out.ndim == 0 else out


def contrast_factor(plane, lam=None, sphere=None):
    """Image-strength factor ``(1 - eps_p)/(1 + eps_p)`` of the plane.

    A perfect conductor gives -1.  For :class:`DrudeLossless` planes the
    result depends on ``lam`` and on the sphere material, which sets the
    frequency normalisation.
    """
    if isinstance(plane, PerfectConductor):
        return -1.0
    if isinstance(plane, StaticDielectric):
        if np.isinf(plane.eps):
            return -1.0
        return (1.0 - plane.eps) / (1.0 + plane.eps)
    if isinstance(plane, DrudeLossless):
        if lam is None or sphere is None:
            raise DomainError("Drude plane contrast needs both lam and the sphere material")
        return drude_contrast_factor(lam, plasma_ratio(sphere, plane.material))
    raise TypeError(f"unknown plane model {plane!r}")


def default_materials_path():
    return Path(str(resources.files("sphereplane") / "data" / "materials.txt"))


def resolve_materials_path(path=None):
    """Explicit path, else the environment override, else the shipped file."""
    if path is not None:
        return Path(path)
    env = os.environ.get(MATERIALS_ENV)
    if env:
        return Path(env)
    return default_materials_path()


class MaterialTable(dict):
    """Name -> :class:`Material` mapping that remembers its source file."""

    def __init__(self, items, source):
        super().__init__(items)
        self.source = source

    def __missing__(self, name):
        raise MaterialsError(f"material {name!r} not found in {self.source}")

    def __setitem__(self, key, value):
        raise TypeError("material table is read-only")


def load_materials(path=None):
    """Parse a materials file (``name plasma_eV damping_ratio`` per line).

    ``#`` starts a comment; blank lines are ignored.
    """
    path = resolve_materials_path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MaterialsError(f"cannot read materials file {path}: {exc}") from exc

    items = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 3:
            raise MaterialsError(f"{path}:{lineno}: expected 3 columns, got {len(fields)}")
        name = fields[0]
        try:
            plasma, damping = float(fields[1]), float(fields[2])
        except ValueError as exc:
            raise MaterialsError(f"{path}:{lineno}: {exc}") from exc
        if name in items:
            raise MaterialsError(f"{path}:{lineno}: duplicate material {name!r}")
        try:
            items[name] = Material(name, plasma, damping)
        except DomainError as exc:
            raise MaterialsError(f"{path}:{lineno}: {exc}") from exc
    return MaterialTable(items, path)
