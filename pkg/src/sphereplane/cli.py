"""Command-line front end; every subcommand writes one CSV table.

Exit codes: 0 success, 1 usage/config/materials error, 2 numerical error.
"""
import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import analysis, planes, spectral
from .errors import MaterialsError, NumericalError, SpherePlaneError
from .materials import (
    DrudeLossless, PerfectConductor, StaticDielectric, load_materials, resolve_materials_path,
)

COLUMNS = {
    "modes": ["z_over_a", "m", "weight", "index", "branch", "eigenvalue", "omega_over_wp", "reference"],
    "energy": ["z_over_a", "E_tilde", "L"],
    "force": ["z_over_a", "aF_tilde", "L"],
    "sweep": ["z_over_a", "E_tilde", "aF_tilde", "L"],
    "dissimilar": ["z_over_a", "E_AB_eV", "E_BA_eV", "aF_AB_eV", "aF_BA_eV", "delta_E", "delta_F", "L"],
    "planes": ["kz", "omega_plus", "omega_minus", "omega_plus_series", "omega_minus_series"],
    "proximity": ["z_over_a", "aF_exact_tilde", "aF_PT_tilde", "rel_diff", "L"],
    "convergence": ["z_over_a", "L_required", "capped", "E_tilde"],
    "truncation": ["z_over_a", "aF_LH", "aF_LW", "rel_diff"],
}

# appended when --radius is given
PHYSICAL_COLUMNS = {
    "energy": ["z", "E_eV"],
    "force": ["z", "F_eV_per_length"],
    "sweep": ["z", "E_eV", "F_eV_per_length"],
    "dissimilar": ["z", "F_AB_eV_per_length", "F_BA_eV_per_length"],
    "proximity": ["z", "F_exact_eV_per_length", "F_PT_eV_per_length"],
}


class UsageError(SpherePlaneError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class RunConfig:
    command: str
    zmin: float = 0.1
    zmax: float = 10.0
    points: int = 20
    log: bool = True
    L: Optional[int] = None
    auto_L: bool = False
    tol: float = analysis.AUTO_L_TOL
    L_max: int = analysis.AUTO_L_MAX
    sphere: str = "Au"
    plane_model: str = "conductor"
    plane: Optional[str] = None
    eps_plane: Optional[float] = None
    a: Optional[str] = None
    b: Optional[str] = None
    LH: int = 80
    LW: int = 1
    radius: Optional[float] = None
    output: Optional[str] = None
    materials: Optional[str] = None
    workers: int = 1

    def __post_init__(self):
        if not self.zmin > 0:
            raise UsageError("grid minimum must be positive")
        if self.points < 1:
            raise UsageError("--points must be >= 1")
        if self.points > 1 and not self.zmax > self.zmin:
            raise UsageError("--zmax must exceed --zmin")
        if self.L is not None and self.L < 1:
            raise UsageError("--L must be >= 1")
        if self.radius is not None and not self.radius > 0:
            raise UsageError("--radius must be positive")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")

    @property
    def grid(self):
        return analysis.make_grid(self.zmin, self.zmax, self.points, self.log)


def _column_help(cmd):
    text = "CSV columns: " + ", ".join(COLUMNS[cmd])
    if cmd in PHYSICAL_COLUMNS:
        text += "; with --radius also: " + ", ".join(PHYSICAL_COLUMNS[cmd])
    return text


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--materials", help="materials file (overrides $SPHEREPLANE_MATERIALS)")
    common.add_argument("-o", "--output", help="output CSV path (default: stdout)")
    common.add_argument("--workers", type=int, default=1, help="threads for grid evaluation")

    grid = _Parser(add_help=False)
    grid.add_argument("--zmin", type=float, default=0.1)
    grid.add_argument("--zmax", type=float, default=10.0)
    grid.add_argument("--points", type=int, default=20)
    scale = grid.add_mutually_exclusive_group()
    scale.add_argument("--log", dest="log", action="store_true", default=True, help="log-spaced grid (default)")
    scale.add_argument("--linear", dest="log", action="store_false", help="linearly spaced grid")

    model = _Parser(add_help=False)
    model.add_argument("--sphere", default="Au", help="sphere material (default Au)")
    model.add_argument("--plane-model", default="conductor",
                       choices=["conductor", "dielectric", "vacuum", "drude"])
    model.add_argument("--plane", help="plane material for --plane-model drude (default: sphere material)")
    model.add_argument("--eps-plane", type=float, help="permittivity for --plane-model dielectric")
    model.add_argument("--radius", type=float, help="sphere radius; adds physical columns")

    cutoff = _Parser(add_help=False)
    cutoff.add_argument("--L", type=int, help="multipole cutoff")
    cutoff.add_argument("--auto-L", action="store_true", help="pick L per point by convergence scan")
    cutoff.add_argument("--tol", type=float, default=analysis.AUTO_L_TOL)
    cutoff.add_argument("--L-max", type=int, default=analysis.AUTO_L_MAX)

    parser = _Parser(prog="sphereplane", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, parents, help_):
        return sub.add_parser(name, parents=parents, help=help_, description=help_, epilog=_column_help(name))

    add("modes", [common, grid, model, cutoff], "mode eigenvalues per block (sorted-order branch labels)")
    add("energy", [common, grid, model, cutoff], "dimensionless zero-point interaction energy")
    add("force", [common, grid, model, cutoff], "dimensionless force a F / (hbar omega_p)")
    add("sweep", [common, grid, model, cutoff], "energy and force over a z/a grid")

    p = add("dissimilar", [common, grid], "sphere A over plane B versus sphere B over plane A")
    p.add_argument("--a", required=True, help="material A")
    p.add_argument("--b", required=True, help="material B")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--radius", type=float)

    add("planes", [common, grid], "parallel-plate modes versus k z (grid flags give k z)")
    add("proximity", [common, grid, model, cutoff], "exact force versus the proximity theorem")

    p = add("convergence", [common, grid, model], "multipole cutoff needed for energy convergence")
    p.add_argument("--tol", type=float, default=analysis.AUTO_L_TOL)
    p.add_argument("--L-max", type=int, default=analysis.AUTO_L_MAX)

    p = add("truncation", [common, grid, model], "relative force error of a low cutoff")
    p.add_argument("--LH", type=int, default=80)
    p.add_argument("--LW", type=int, default=1)
    return parser


def parse_config(argv):
    ns = build_parser().parse_args(argv)
    fields = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__}
    return RunConfig(**fields)


def _plane_model(cfg, table, default="conductor"):
    kind = cfg.plane_model or default
    if kind == "conductor":
        return PerfectConductor()
    if kind == "vacuum":
        return StaticDielectric(1.0)
    if kind == "dielectric":
        if cfg.eps_plane is None:
            raise UsageError("--plane-model dielectric needs --eps-plane")
        try:
            return StaticDielectric(cfg.eps_plane)
        except SpherePlaneError as exc:
            raise UsageError(str(exc)) from exc
    return DrudeLossless(table[cfg.plane or cfg.sphere])


def _need_L(cfg, allow_auto=True):
    if cfg.auto_L and allow_auto:
        return None
    if cfg.L is None:
        raise UsageError("give --L" + (" or --auto-L" if allow_auto else ""))
    return cfg.L


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return f"{float(v):.12g}"


def _rows_sweeplike(cfg, table):
    plane = _plane_model(cfg, table)
    sphere = table[cfg.sphere]
    L = _need_L(cfg)
    res = analysis.sweep(cfg.grid, L, plane, sphere, auto_L=cfg.auto_L, tol=cfg.tol,
                         L_max=cfg.L_max, workers=cfg.workers)
    rows = []
    for z, e, f, Lz in zip(res.z_over_a, res.energy, res.force, res.L):
        base = {"energy": [z, e, Lz], "force": [z, f, Lz], "sweep": [z, e, f, Lz]}[cfg.command]
        if cfg.radius is not None:
            extra = {
                "energy": [z * cfg.radius, e * sphere.plasma_energy],
                "force": [z * cfg.radius, f * sphere.plasma_energy / cfg.radius],
                "sweep": [z * cfg.radius, e * sphere.plasma_energy, f * sphere.plasma_energy / cfg.radius],
            }[cfg.command]
            base = base + extra
        rows.append(base)
    return rows


def _rows_modes(cfg, table):
    plane = _plane_model(cfg, table)
    sphere = table[cfg.sphere]
    L = _need_L(cfg, allow_auto=False)
    sets = analysis._map(lambda z: spectral.compute_modes(z, L, plane, sphere), cfg.grid, cfg.workers)
    rows = []
    for ms in sets:
        for md in ms.modes:
            rows.append([ms.z_over_a, md.m, md.weight, md.index, md.branch, md.value,
                         math.sqrt(md.value), md.reference])
    return rows


def _rows_dissimilar(cfg, table):
    a, b = table[cfg.a], table[cfg.b]
    L = _need_L(cfg, allow_auto=False)
    res = analysis.dissimilar_difference(a, b, cfg.grid, L, workers=cfg.workers)
    rows = []
    for i, z in enumerate(res.z_over_a):
        row = [z, res.energy_ab[i], res.energy_ba[i], res.force_ab[i], res.force_ba[i],
               res.delta_energy[i], res.delta_force[i], L]
        if cfg.radius is not None:
            row += [z * cfg.radius, res.force_ab[i] / cfg.radius, res.force_ba[i] / cfg.radius]
        rows.append(row)
    return rows


def _rows_planes(cfg, table):
    kz = cfg.grid
    plus, minus = planes.plate_modes(kz)
    sp, sm = planes.plate_modes_series(kz)
    return [list(r) for r in zip(np.atleast_1d(kz), np.atleast_1d(plus), np.atleast_1d(minus),
                                 np.atleast_1d(sp), np.atleast_1d(sm))]


def _rows_proximity(cfg, table):
    sphere = table[cfg.sphere]
    if cfg.plane_model == "conductor" and cfg.plane is None:
        # proximity plates are same-material Drude; compare like with like
        cfg.plane_model = "drude"
    plane = _plane_model(cfg, table)
    L = _need_L(cfg)
    res = analysis.sweep(cfg.grid, L, plane, sphere, auto_L=cfg.auto_L, tol=cfg.tol,
                         L_max=cfg.L_max, workers=cfg.workers)
    pt = planes.proximity_force_tilde(res.z_over_a)
    rows = []
    for z, f, p, Lz in zip(res.z_over_a, res.force, np.atleast_1d(pt), res.L):
        row = [z, f, p, abs((p - f) / f), Lz]
        if cfg.radius is not None:
            scale = sphere.plasma_energy / cfg.radius
            row += [z * cfg.radius, f * scale, p * scale]
        rows.append(row)
    return rows


def _rows_convergence(cfg, table):
    plane = _plane_model(cfg, table)
    if isinstance(plane, DrudeLossless):
        raise UsageError("convergence needs a constant-f_c plane model")
    from .materials import contrast_factor
    res = analysis.convergence_scan(cfg.grid, cfg.tol, cfg.L_max, contrast_factor(plane), workers=cfg.workers)
    return [[z, L, c, e] for z, L, c, e in zip(res.z_over_a, res.L, res.capped, res.energy)]


def _rows_truncation(cfg, table):
    plane = _plane_model(cfg, table)
    if isinstance(plane, DrudeLossless):
        raise UsageError("truncation needs a constant-f_c plane model")
    from .materials import contrast_factor
    f_c = contrast_factor(plane)
    if cfg.LW < 1 or cfg.LH < cfg.LW:
        raise UsageError("need --LH >= --LW >= 1")

    def point(z):
        hi = spectral.force(z, f_c, cfg.LH)
        lo = spectral.force(z, f_c, cfg.LW)
        return [z, hi, lo, abs((hi - lo) / hi) if hi != 0 else 0.0]

    return analysis._map(point, cfg.grid, cfg.workers)


HANDLERS = {
    "modes": _rows_modes,
    "energy": _rows_sweeplike,
    "force": _rows_sweeplike,
    "sweep": _rows_sweeplike,
    "dissimilar": _rows_dissimilar,
    "planes": _rows_planes,
    "proximity": _rows_proximity,
    "convergence": _rows_convergence,
    "truncation": _rows_truncation,
}


def render_csv(cfg, rows):
    header = list(COLUMNS[cfg.command])
    if cfg.radius is not None and cfg.command in PHYSICAL_COLUMNS:
        header += PHYSICAL_COLUMNS[cfg.command]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def run(argv=None, stdout=None, stderr=None):
    """Run one subcommand; returns the process exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        cfg = parse_config(argv)
        needs_table = cfg.command != "planes"
        table = load_materials(resolve_materials_path(cfg.materials)) if needs_table else None
        text = render_csv(cfg, HANDLERS[cfg.command](cfg, table))
    except NumericalError as exc:
        print(f"sphereplane: numerical error: {exc}", file=stderr)
        return 2
    except (UsageError, MaterialsError) as exc:
        print(f"sphereplane: {exc}", file=stderr)
        return 1
    except SpherePlaneError as exc:
        print(f"sphereplane: {exc}", file=stderr)
        return 1
    if cfg.output:
        try:
            with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"sphereplane: cannot write {cfg.output}: {exc}", file=stderr)
            return 1
    else:
        stdout.write(text)
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
