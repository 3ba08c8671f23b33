"""Parallel-plate reference and the proximity-force estimate.

Two identical lossless Drude half-spaces a distance ``z`` apart carry, for
every in-plane wavevector ``k``, the coupled surface plasmons
``omega_pm**2 = (omega_p**2 / 2)(1 +- exp(-k z))``.
"""
import math
import threading

import mpmath
import numpy as np
from scipy.integrate import quad

from .errors import DomainError


def plate_modes(kz):
    """``(omega_+, omega_-) / omega_p`` for separation-scaled wavevector ``k z``."""
    kz = np.asarray(kz, dtype=float)
    if np.any(kz <= 0):
        raise DomainError("k z must be positive")
    e = np.exp(-kz)
    plus = np.sqrt(0.5 * (1.0 + e))
    minus = np.sqrt(-0.5 * np.expm1(-kz))
    if plus.ndim == 0:
        return float(plus), float(minus)
    return plus, minus


def plate_modes_mp(kz, dps=40):
    """:func:`plate_modes` at ``dps`` decimal digits (scalar ``kz``, mpf results).

    Float roots cannot satisfy the mode condition much better than
    ``exp(kz) * 1e-16``; use this when the residual matters at large ``k z``.
    """
    with mpmath.workdps(dps):
        kz = mpmath.mpf(kz)
        if kz <= 0:
            raise DomainError("k z must be positive")
        e = mpmath.exp(-kz)
        return mpmath.sqrt((1 + e) / 2), mpmath.sqrt((1 - e) / 2)


def plate_modes_series(kz):
    """Large-separation expansion to second order in ``exp(-k z)``."""
    e = np.exp(-np.asarray(kz, dtype=float))
    base = 1.0 / math.sqrt(2.0)
    plus = base * (1.0 + 0.5 * e - 0.125 * e**2)
    minus = base * (1.0 - 0.5 * e - 0.125 * e**2)
    if plus.ndim == 0:
        return float(plus), float(minus)
    return plus, minus


def plate_mode_residual(omega_ratio, kz, dps=50):
    """``[(eps+1)/(eps-1)]**2 exp(2 k z) - 1`` at a lossless Drude root.

    Evaluated in extended precision so the residual reflects the root, not
    the evaluation.
    """
    with mpmath.workdps(dps):
        w = mpmath.mpf(omega_ratio) if not isinstance(omega_ratio, mpmath.mpf) else omega_ratio
        eps = 1 - 1 / w**2
        val = ((eps + 1) / (eps - 1)) ** 2 * mpmath.exp(2 * mpmath.mpf(kz)) - 1
        return float(val)


def _mode_shift(t):
    # sqrt(1+e) + sqrt(1-e) - 2 with e = exp(-t), written without cancellation
    e = math.exp(-t)
    sp = math.sqrt(1.0 + e)
    sm = math.sqrt(-math.expm1(-t))
    return e / (sp + 1.0) - e / (sm + 1.0)


_integral_lock = threading.Lock()
_integral_value = None


def plate_mode_integral():
    """``I = int_0^inf t [sqrt(1+e^-t) + sqrt(1-e^-t) - 2] dt``, computed once."""
    global _integral_value
    if _integral_value is None:
        with _integral_lock:
            if _integral_value is None:
                head, _ = quad(lambda t: t * _mode_shift(t), 0.0, 1.0, epsabs=1e-14, epsrel=1e-12, limit=200)
                tail, _ = quad(lambda t: t * _mode_shift(t), 1.0, np.inf, epsabs=1e-14, epsrel=1e-12, limit=200)
                _integral_value = head + tail
    return _integral_value


def plate_energy_per_area(material, z):
    """Non-retarded interaction energy per unit area of two identical plates.

    ``V = hbar omega_p I / (4 pi sqrt(2) z**2)`` in eV per squared length
    unit of ``z``.  Negative (binding).
    """
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise DomainError("plate separation must be positive")
    v = material.plasma_energy * plate_mode_integral() / (4.0 * math.pi * math.sqrt(2.0) * z**2)
    return v[()] if v.ndim == 0 else v


def proximity_force(radius, material, z):
    """Proximity-theorem sphere-plane force ``2 pi R V(z)`` (eV per length)."""
    if not radius > 0:
        raise DomainError("radius must be positive")
    return 2.0 * math.pi * radius * plate_energy_per_area(material, z)


def proximity_force_tilde(z_over_a):
    """Proximity force as ``a F / (hbar omega_p)``, radius independent."""
    z = np.asarray(z_over_a, dtype=float)
    out = plate_mode_integral() / (2.0 * math.sqrt(2.0) * z**2)
    return out[()] if out.ndim == 0 else out
