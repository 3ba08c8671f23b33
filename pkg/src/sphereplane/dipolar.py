"""Closed-form dipolar (l = 1) modes of a Drude sphere above a plane.

In the spectral variable the polarizability condition reads
``1 - 3u + c f_c x**3 = 0`` with ``c = 1`` for the two transverse dipoles
and ``c = 2`` for the dipole along the normal.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .coupling import coupling_ratio
from .errors import ModeCollapseError, NonRealModeError, NumericalError
from .materials import drude_contrast_factor

TRANSVERSE = 1
LONGITUDINAL = 2


@dataclass(frozen=True)
class DipolarModes:
    """Squared dipolar frequencies in units of the sphere plasma frequency.

    Plane-branch fields are ``None`` for a constant contrast factor, which
    has no plane plasmon.
    """

    sphere_transverse: float
    sphere_longitudinal: float
    plane_transverse: Optional[float] = None
    plane_longitudinal: Optional[float] = None

    @property
    def sphere_branch(self):
        """Three values: transverse twice, then longitudinal."""
        return [self.sphere_transverse, self.sphere_transverse, self.sphere_longitudinal]

    @property
    def plane_branch(self):
        if self.plane_transverse is None:
            return []
        return [self.plane_transverse, self.plane_transverse, self.plane_longitudinal]

    @property
    def frequencies(self):
        """``omega / omega_p`` of all modes, sphere branch first."""
        return [math.sqrt(v) for v in self.sphere_branch + self.plane_branch]


def dipolar_modes_constant_fc(x, f_c):
    u_t = 1.0 / 3.0 + f_c * x**3 / 3.0
    u_l = 1.0 / 3.0 + 2.0 * f_c * x**3 / 3.0
    if min(u_t, u_l) <= 0:
        raise ModeCollapseError(f"dipolar mode collapsed (u={min(u_t, u_l):.3g})", 0.5 / x - 1.0, None, 1)
    return DipolarModes(u_t, u_l)


def _stable_roots(b, c):
    """Roots of ``lam**2 + b lam + c = 0`` avoiding cancellation; ascending."""
    disc = b * b - 4.0 * c
    if disc < 0:
        raise NonRealModeError(f"complex dipolar roots (discriminant {disc:.3g})")
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    r1, r2 = q, c / q
    return (r1, r2) if r1 <= r2 else (r2, r1)


def _drude_pair(x, r, c):
    # (2 lam - r)(1/3 - lam) + c r x^3 / 3 = 0, divided by -2
    b = -(1.0 / 3.0 + 0.5 * r)
    k = r * (1.0 - c * x**3) / 6.0
    lo, hi = _stable_roots(b, k)
    # roots never cross for x > 0; the sphere branch starts at 1/3, the plane at r/2
    if r / 2 >= 1.0 / 3.0:
        sphere, plane = lo, hi
    else:
        sphere, plane = hi, lo
    return sphere, plane


def dipolar_modes_drude(x, r):
    """All six dipolar modes over a lossless Drude plane with plasma ratio ``r``."""
    st, pt = _drude_pair(x, r, TRANSVERSE)
    sl, pl = _drude_pair(x, r, LONGITUDINAL)
    if min(st, pt, sl, pl) <= 0:
        raise ModeCollapseError("dipolar mode collapsed", 0.5 / x - 1.0, None, 1)
    if r >= 1 and x < 0.4 and not (st < pt and sl < pl):
        raise NumericalError(f"dipolar branch ordering violated at x={x}, r={r}")
    return DipolarModes(st, sl, pt, pl)


def polarizability_curves(omega_ratio, z_over_a, r=1.0):
    """Graphical mode construction for a Drude sphere over a Drude plane.

    Returns ``(inv_alpha, image)`` sampled at ``omega_ratio``:
    the inverse dipolar polarizability ``1 - 3 w**2`` of a lossless sphere
    and the image term ``f_c(w) x**3``.  Modes lie where
    ``inv_alpha + c * image == 0``.
    """
    w = np.asarray(omega_ratio, dtype=float)
    x = coupling_ratio(z_over_a)
    inv_alpha = 1.0 - 3.0 * w**2
    with np.errstate(divide="ignore"):
        denom = 2.0 * w**2 - r
        image = np.where(denom == 0, np.nan, r / np.where(denom == 0, 1.0, denom)) * x**3
    return inv_alpha, image
