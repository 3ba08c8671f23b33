"""Exception types shared across the package."""


class SpherePlaneError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SpherePlaneError, ValueError):
    """An argument lies outside the domain of an operation."""


class PoleError(DomainError):
    """Evaluation exactly at a pole of the contrast factor."""


class MaterialsError(SpherePlaneError):
    """Materials file could not be parsed, or a lookup failed."""


class NumericalError(SpherePlaneError):
    """A computation produced an unusable result.

    The offending separation, azimuthal block and multipole cutoff are
    kept as attributes (any of them may be ``None``) and appended to the
    message so the CLI can report them.
    """

    def __init__(self, message, z_over_a=None, m=None, L=None):
        self.z_over_a = z_over_a
        self.m = m
        self.L = L
        ctx = []
        if z_over_a is not None:
            ctx.append(f"z/a={z_over_a:.6g}")
        if m is not None:
            ctx.append(f"m={m}")
        if L is not None:
            ctx.append(f"L={L}")
        if ctx:
            message = f"{message} ({', '.join(ctx)})"
        super().__init__(message)


class ModeCollapseError(NumericalError):
    """A mode eigenvalue reached zero or below: separation too small."""


class NonRealModeError(NumericalError):
    """A mode eigenvalue carries a non-negligible imaginary part."""


class ConsistencyError(NumericalError):
    """Two independent routes to the same quantity disagree."""
