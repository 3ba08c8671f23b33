"""Geometric multipole coupling between a sphere and its image in a plane.

Everything here is independent of the materials.  The single geometric
parameter is the coupling ratio ``x = a / (2 (z + a))``, the sphere radius
over the centre-to-image distance, which lies in ``(0, 1/2)``.
"""
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from .errors import DomainError


@dataclass(frozen=True)
class Geometry:
    """Sphere of radius ``radius`` whose surface is ``gap`` above the plane."""

    radius: float
    gap: float

    def __post_init__(self):
        if not (self.radius > 0 and self.gap > 0):
            raise DomainError(f"radius and gap must be positive, got a={self.radius}, z={self.gap}")

    @classmethod
    def from_ratio(cls, z_over_a, radius=1.0):
        return cls(radius, z_over_a * radius)

    @property
    def z_over_a(self):
        return self.gap / self.radius

    @property
    def x(self):
        return coupling_ratio(self.z_over_a)

    @property
    def image_distance(self):
        return 2.0 * (self.gap + self.radius)


def coupling_ratio(z_over_a):
    """``x = 1 / (2 (1 + z/a))``."""
    z = np.asarray(z_over_a, dtype=float)
    if np.any(z <= 0):
        raise DomainError("z/a must be positive")
    x = 0.5 / (1.0 + z)
    return x[()] if x.ndim == 0 else x


def z_over_a_from_ratio(x):
    return 0.5 / x - 1.0


def _check_lm(l, lp, m):
    if l < 1 or lp < 1:
        raise DomainError(f"multipole orders must be >= 1, got l={l}, l'={lp}")
    if abs(m) > min(l, lp):
        raise DomainError(f"|m|={abs(m)} exceeds min(l, l')={min(l, lp)}")


def log_coupling_coefficient(l, lp, m):
    """Natural log of :func:`coupling_coefficient`; broadcasts over arrays."""
    m = abs(m)
    l = np.asarray(l, dtype=float)
    lp = np.asarray(lp, dtype=float)
    # canonical order keeps the float result exactly symmetric
    l, lp = np.minimum(l, lp), np.maximum(l, lp)
    return gammaln(l + lp + 1) - 0.5 * (
        np.log(2 * l + 1) + np.log(2 * lp + 1)
        + gammaln(l + m + 1) + gammaln(l - m + 1)
        + gammaln(lp + m + 1) + gammaln(lp - m + 1)
    )


def coupling_coefficient(l, lp, m):
    r"""Separation-independent part of the coupling tensor.

    .. math::

        C(l, l', m) = \left[\frac{((l+l')!)^2}
        {(2l+1)(2l'+1)(l+m)!(l-m)!(l'+m)!(l'-m)!}\right]^{1/2}

    Evaluated in the log domain so that large orders do not overflow.
    """
    _check_lm(l, lp, m)
    return float(np.exp(log_coupling_coefficient(l, lp, m)))


def a_tensor_element(l, m, lp, mp, geometry):
    """Sphere-image interaction tensor element, in exact integer arithmetic.

    Uses the general form with the spherical harmonic of order
    ``l + l'`` evaluated on the symmetry axis, where only ``m == m'``
    survives.  Slow; meant as an independent check of
    :func:`coupling_matrix`.
    """
    l, m, lp, mp = int(l), int(m), int(lp), int(mp)
    if l < 1 or lp < 1:
        raise DomainError(f"multipole orders must be >= 1, got l={l}, l'={lp}")
    if abs(m) > l or abs(mp) > lp:
        raise DomainError("|m| must not exceed l")
    if m != mp:
        return 0.0
    n = l + lp
    ratio = Fraction(
        math.factorial(n + m - mp) * math.factorial(n - m + mp),
        (2 * l + 1) * (2 * lp + 1) * (2 * n + 1)
        * math.factorial(l + m) * math.factorial(l - m)
        * math.factorial(lp + mp) * math.factorial(lp - mp),
    )
    # axis harmonic sqrt((2n+1)/4pi) times sqrt((4pi)^3 ratio)
    harmonic_sq = Fraction(2 * n + 1)
    root = 4.0 * math.pi * math.sqrt(float(harmonic_sq * ratio))
    r = geometry.image_distance
    return root / r ** (n + 1)


def block_orders(m, L):
    """Multipole orders ``l = max(1, |m|) .. L`` carried by block ``m``."""
    lo = max(1, abs(m))
    if L < lo:
        raise DomainError(f"cutoff L={L} below the first order {lo} of block m={m}")
    return np.arange(lo, L + 1)


@dataclass(frozen=True)
class CouplingBlock:
    """Symmetric coupling matrix ``W`` of one azimuthal block.

    ``entries[i, j]`` couples orders ``orders[i]`` and ``orders[j]``.
    """

    m: int
    L: int
    x: float
    orders: np.ndarray
    entries: np.ndarray


def _log_entries(m, L, x):
    ls = block_orders(m, L)
    l = ls[:, None]
    lp = ls[None, :]
    logw = 0.5 * np.log(l * lp) + (l + lp + 1) * np.log(x) + log_coupling_coefficient(l, lp, m)
    return ls, logw


def coupling_matrix(m, L, x):
    """Coupling block ``W_ll' = sqrt(l l') x**(l+l'+1) C(l, l', m)``.

    ``x = 0`` (infinite separation) gives the zero matrix.
    """
    if not 0.0 <= x < 0.5:
        raise DomainError(f"coupling ratio must lie in [0, 1/2), got {x}")
    m = abs(m)
    if x == 0.0:
        ls = block_orders(m, L)
        w = np.zeros((len(ls), len(ls)))
    else:
        ls, logw = _log_entries(m, L, x)
        w = np.exp(logw)
    w = 0.5 * (w + w.T)
    w.setflags(write=False)
    return CouplingBlock(m, L, float(x), ls, w)


def coupling_matrix_derivative(block):
    """``dW/d(z/a)`` for a block; entries scale as ``x**(l+l'+1)``.

    With ``dx/d(z/a) = -2 x**2`` each entry picks up ``-2 x (l+l'+1)``.
    """
    ls = block.orders
    power = ls[:, None] + ls[None, :] + 1
    return -2.0 * block.x * power * block.entries
