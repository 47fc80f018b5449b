"""Command-line front end: solve, sweep, contour, evolve, acrit, verify.

Single solutions are printed as JSON; sweeps, contour grids and curve
snapshots are written as CSV with a fixed column order and 12 significant
digits, so identical inputs produce byte-identical output.  Exit codes:
0 success, 1 usage error, 2 numeric failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .density import Density, Dimension, critical_mass, critical_offset
from .evolver import evolve_2d, evolve_3d_axisym, isoperimetric_quotient
from .interval1d import (
    Interval,
    IntervalSolution,
    brute_force_oracle,
    contour_grid,
    mass1d,
    perimeter1d,
    reduce_intervals,
    solve_general,
    solve_p1,
    solve_p2,
    solve_p_lt_1,
)
from .numerics import NumericError
from .radial import (
    BallSolution,
    offcenter_p2_2d,
    offcenter_p2_3d,
    offcenter_quadrature_2d,
    offcenter_quadrature_3d,
    solve_2d_p2,
    solve_3d_p2,
    symmetric_ball,
)

__all__ = ["main"]

VERIFY_SUITES = ("oracle1d", "branch-continuity", "reduction", "radial-quadrature",
                 "evolver-p2")


@dataclass(frozen=True)
class SweepRecord:
    """One row of an offset sweep: the solved optimum at a single a value.

    end1/end2 hold (alpha, beta) in 1D and (R, r0) in 2D/3D.
    """

    a: float
    branch: str
    end1: float
    end2: float
    perimeter: float
    mass_residual: float

    def row(self) -> list:
        return [self.a, self.branch, self.end1, self.end2,
                self.perimeter, self.mass_residual]


def _fmt(x: float) -> str:
    return f"{x + 0.0:.12g}" if x == 0.0 else f"{x:.12g}"


def _round12(obj):
    if isinstance(obj, float):
        return float(_fmt(obj)) if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    return obj


def _emit_json(record: dict) -> None:
    print(json.dumps(_round12(record), sort_keys=True))


def _write_csv(path: Optional[str], header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _dispatch_1d(p: float, a: float, mass: float, force_numeric: bool) -> IntervalSolution:
    if force_numeric:
        return solve_general(Density(p, a), mass)
    if p == 2.0:
        return solve_p2(a, mass)
    if p == 1.0:
        return solve_p1(a, mass)
    if p < 1.0:
        return solve_p_lt_1(Density(p, a), mass)
    return solve_general(Density(p, a), mass)


def _dispatch_ball(dim: int, p: float, a: float, mass: float) -> BallSolution:
    if p == 2.0:
        return solve_2d_p2(a, mass) if dim == 2 else solve_3d_p2(a, mass)
    return symmetric_ball(Density(p, a), Dimension(dim), mass)


def _solution_record(dim: int, p: float, a: float, mass: float, sol) -> dict:
    rec = {"dim": dim, "p": p, "a": a, "mass": mass, "branch": sol.branch.value,
           "perimeter": sol.perimeter,
           "lagrange_multiplier": sol.lagrange_multiplier}
    if isinstance(sol, IntervalSolution):
        rec["alpha"] = sol.alpha
        rec["beta"] = sol.beta
        rec["mass_residual"] = mass1d(Density(p, a), Interval(sol.alpha, sol.beta)) - mass
    else:
        rec["R"] = sol.radius
        rec["r0"] = sol.center_offset
        rec["mass_residual"] = sol.mass - mass
    return rec


def _cmd_solve(args) -> int:
    dens = Density(args.p, args.a)  # validates p > 0, a >= 0
    if args.mass <= 0.0:
        raise ValueError("--mass must be positive")
    if args.dim == 1:
        sol = _dispatch_1d(args.p, args.a, args.mass, args.force_numeric)
    else:
        if args.force_numeric:
            raise ValueError("--force-numeric applies to --dim 1 only; use the evolve command")
        sol = _dispatch_ball(args.dim, dens.p, dens.a, args.mass)
    record = _solution_record(args.dim, args.p, args.a, args.mass, sol)
    if args.dim > 1 and args.p != 2.0 and args.p > 1.0:
        a_crit = critical_offset(args.p, Dimension(args.dim), args.mass)
        if args.a < a_crit:
            record["note"] = ("centred branch only: below the critical offset "
                              "the optimum may be off-centre; use the evolve command")
    _emit_json(record)
    return 0


def _sweep_one(dim: int, p: float, a: float, mass: float) -> SweepRecord:
    if dim == 1:
        sol = _dispatch_1d(p, a, mass, force_numeric=False)
        resid = mass1d(Density(p, a), Interval(sol.alpha, sol.beta)) - mass
        return SweepRecord(a, sol.branch.value, sol.alpha, sol.beta, sol.perimeter, resid)
    sol = _dispatch_ball(dim, p, a, mass)
    return SweepRecord(a, sol.branch.value, sol.radius, sol.center_offset,
                       sol.perimeter, sol.mass - mass)


def _cmd_sweep(args) -> int:
    Density(args.p, 0.0)
    if args.steps < 2:
        raise ValueError("--steps must be at least 2")
    if args.a_min > args.a_max or args.a_min < 0.0:
        raise ValueError("need 0 <= a-min <= a-max")
    if args.mass <= 0.0:
        raise ValueError("--mass must be positive")
    avals = np.linspace(args.a_min, args.a_max, args.steps)
    threads = int(os.environ.get("ISODENSE_THREADS", "1") or "1")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=min(threads, len(avals))) as pool:
            records = list(pool.map(
                lambda a: _sweep_one(args.dim, args.p, float(a), args.mass), avals))
    else:
        records = [_sweep_one(args.dim, args.p, float(a), args.mass) for a in avals]
    records.sort(key=lambda r: r.a)
    end_cols = ["alpha", "beta"] if args.dim == 1 else ["R", "r0"]
    _write_csv(args.out, ["a", "branch", *end_cols, "perimeter", "mass_residual"],
               [r.row() for r in records])
    return 0


def _cmd_contour(args) -> int:
    dens = Density(args.p, args.a)
    if args.mass <= 0.0:
        raise ValueError("--mass must be positive")
    if args.grid < 2:
        raise ValueError("--grid must be at least 2")
    # extent: a little past the widest one-ended interval of the target mass
    from .interval1d import _invert_primitive
    extent = 1.05 * _invert_primitive(dens, args.mass)
    grid = contour_grid(dens, extent, extent, args.grid)
    # flag grid nodes within half a cell of the target-mass level set
    dm_i = np.max(np.abs(np.diff(grid.mass, axis=0))) if args.grid > 1 else 0.0
    dm_j = np.max(np.abs(np.diff(grid.mass, axis=1))) if args.grid > 1 else 0.0
    band = 0.5 * max(dm_i, dm_j)
    rows = []
    for i in range(args.grid):
        for j in range(args.grid):
            m = float(grid.mass[i, j])
            rows.append([float(grid.alpha_abs[i]), float(grid.beta[j]),
                         float(grid.perimeter[i, j]), m,
                         int(abs(m - args.mass) < band)])
    _write_csv(args.out, ["alpha_abs", "beta", "perimeter", "mass", "on_constraint"], rows)
    return 0


def _cmd_evolve(args) -> int:
    dens = Density(args.p, args.a)
    if args.mass <= 0.0:
        raise ValueError("--mass must be positive")
    if args.dim == 2:
        report = evolve_2d(dens, args.mass, n=args.vertices, max_iters=args.iters,
                           tol=args.tol)
    elif args.dim == 3:
        report = evolve_3d_axisym(dens, args.mass, n=args.vertices,
                                  max_iters=args.iters, tol=args.tol)
    else:
        raise ValueError("evolve supports --dim 2 or 3")
    rec = {
        "dim": args.dim, "p": args.p, "a": args.a, "mass": args.mass,
        "weighted_perimeter": report.weighted_perimeter,
        "weighted_mass": report.weighted_mass,
        "unweighted_perimeter": report.unweighted_perimeter,
        "unweighted_area": report.unweighted_area,
        "iterations": report.iterations,
        "converged": report.converged,
        "curvature_spread": report.curvature_spread,
        "radius_estimate": report.radius_estimate,
        "center_offset_estimate": report.center_offset_estimate,
        "isoperimetric_quotient": (isoperimetric_quotient(report)
                                   if args.dim == 2 else None),
    }
    _emit_json(rec)
    if args.out is not None:
        V = report.final_curve.vertices
        _write_csv(args.out, ["vertex_index", "x", "y"],
                   [[i, float(v[0]), float(v[1])] for i, v in enumerate(V)])
    return 0


def _cmd_acrit(args) -> int:
    Density(args.p, 0.0)
    rec = {"p": args.p, "dim": args.dim}
    if args.mass is not None:
        rec["mass"] = args.mass
        rec["a_crit"] = critical_offset(args.p, Dimension(args.dim), args.mass)
    if args.a is not None:
        rec["a"] = args.a
        rec["critical_mass"] = critical_mass(Density(args.p, args.a), Dimension(args.dim))
    if args.mass is None and args.a is None:
        raise ValueError("provide --mass (for a_crit) and/or --a (for critical mass)")
    _emit_json(rec)
    return 0


# ---------------------------------------------------------------------------
# Verification suites.
# ---------------------------------------------------------------------------

def _check(name: str, margin: float, ok: bool, failures: list) -> None:
    state = "PASS" if ok else "FAIL"
    print(f"  [{state}] {name} (margin {margin:.3e})")
    if not ok:
        failures.append(name)


def _verify_oracle1d(failures: list) -> None:
    for p in (0.5, 1.0, 1.5, 2.0, 4.0):
        for a in (0.05, 0.3, 1.0):
            for mass in (0.5, 2.0):
                dens = Density(p, a)
                sol = solve_general(dens, mass)
                ref = brute_force_oracle(dens, mass, 4000)
                rel = abs(sol.perimeter - ref.perimeter) / ref.perimeter
                _check(f"oracle1d p={p} a={a} M={mass}", rel, rel <= 1e-4, failures)


def _verify_branch_continuity(failures: list) -> None:
    for mass in (0.5, 1.0, 2.0):
        a_crit = (3.0 * mass) ** (2.0 / 3.0) / 4.0
        p_asym = (3.0 * mass) ** (2.0 / 3.0)
        p_sym = solve_p2(a_crit * (1.0 + 1e-15), mass).perimeter
        rel = abs(p_asym - p_sym) / p_asym
        _check(f"branch continuity p=2 M={mass}", rel, rel <= 1e-9, failures)


def _verify_reduction(failures: list) -> None:
    rng = np.random.default_rng(42)
    worst_mass = 0.0
    worst_per = -math.inf
    for _ in range(200):
        p = float(rng.choice([0.5, 1.0, 2.0, 4.0]))
        a = float(rng.uniform(0.05, 2.0))
        dens = Density(p, a)
        edges = np.sort(rng.uniform(-3.0, 3.0, size=2 * int(rng.integers(1, 5))))
        ivs = [Interval(float(edges[2 * i]), float(edges[2 * i + 1]))
               for i in range(len(edges) // 2)]
        total_mass = sum(mass1d(dens, iv) for iv in ivs)
        total_per = sum(perimeter1d(dens, iv) for iv in ivs)
        out = reduce_intervals(dens, ivs)
        worst_mass = max(worst_mass, abs(mass1d(dens, out) - total_mass) / total_mass)
        worst_per = max(worst_per, (perimeter1d(dens, out) - total_per) / total_per)
    _check("reduction mass conservation", worst_mass, worst_mass <= 1e-10, failures)
    _check("reduction perimeter monotone", worst_per, worst_per <= 1e-12, failures)


def _verify_radial_quadrature(failures: list) -> None:
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(5):
        R = float(rng.uniform(0.3, 1.5))
        r0 = float(rng.uniform(0.0, 0.9 * R))
        a = float(rng.uniform(0.0, 1.5))
        dens = Density(2.0, a)
        per, mass = offcenter_p2_2d(R, r0, a)
        per_q, mass_q = offcenter_quadrature_2d(dens, R, r0)
        worst = max(worst, abs(per - per_q) / per, abs(mass - mass_q) / mass)
        area, mass3 = offcenter_p2_3d(R, r0, a)
        area_q, mass3_q = offcenter_quadrature_3d(dens, R, r0)
        worst = max(worst, abs(area - area_q) / area, abs(mass3 - mass3_q) / mass3)
    _check("off-centre closed forms vs quadrature", worst, worst <= 1e-8, failures)


def _verify_evolver_p2(failures: list) -> None:
    a = 0.2
    report = evolve_2d(Density(2.0, a), 1.0, n=256, max_iters=2000, tol=1e-10)
    ref = solve_2d_p2(a, 1.0)
    rel = abs(report.weighted_perimeter - ref.perimeter) / ref.perimeter
    _check("evolver-p2 perimeter vs closed form", rel, rel <= 1e-2, failures)
    q = isoperimetric_quotient(report)
    _check("evolver-p2 circularity", abs(q - 1.0), abs(q - 1.0) <= 2e-3, failures)


def _cmd_verify(args) -> int:
    failures: list = []
    suite = args.suite
    if suite not in VERIFY_SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {VERIFY_SUITES}")
    print(f"suite {suite}:")
    if suite == "oracle1d":
        _verify_oracle1d(failures)
    elif suite == "branch-continuity":
        _verify_branch_continuity(failures)
    elif suite == "reduction":
        _verify_reduction(failures)
    elif suite == "radial-quadrature":
        _verify_radial_quadrature(failures)
    elif suite == "evolver-p2":
        _verify_evolver_p2(failures)
    if failures:
        print(f"{len(failures)} check(s) failed")
        return 2
    print("all checks passed")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="isodense",
                     description="Weighted isoperimetric solvers for the density r^p + a")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve one (dim, p, a, mass) problem")
    solve.add_argument("--dim", type=int, choices=(1, 2, 3), required=True)
    solve.add_argument("--p", type=float, required=True)
    solve.add_argument("--a", type=float, required=True)
    solve.add_argument("--mass", type=float, default=1.0)
    solve.add_argument("--force-numeric", action="store_true",
                       help="use the numerical 1D minimizer regardless of p")
    solve.set_defaults(func=_cmd_solve)

    sweep = sub.add_parser("sweep", help="sweep the offset a and write a CSV")
    sweep.add_argument("--dim", type=int, choices=(1, 2, 3), required=True)
    sweep.add_argument("--p", type=float, required=True)
    sweep.add_argument("--mass", type=float, default=1.0)
    sweep.add_argument("--a-min", type=float, required=True)
    sweep.add_argument("--a-max", type=float, required=True)
    sweep.add_argument("--steps", type=int, required=True)
    sweep.add_argument("--out", type=str, default=None)
    sweep.set_defaults(func=_cmd_sweep)

    contour = sub.add_parser("contour", help="perimeter/mass grid over the endpoints")
    contour.add_argument("--p", type=float, required=True)
    contour.add_argument("--a", type=float, required=True)
    contour.add_argument("--mass", type=float, default=1.0)
    contour.add_argument("--grid", type=int, default=101)
    contour.add_argument("--out", type=str, default=None)
    contour.set_defaults(func=_cmd_contour)

    evolve = sub.add_parser("evolve", help="run the constrained curve evolver")
    evolve.add_argument("--dim", type=int, choices=(2, 3), required=True)
    evolve.add_argument("--p", type=float, required=True)
    evolve.add_argument("--a", type=float, required=True)
    evolve.add_argument("--mass", type=float, default=1.0)
    evolve.add_argument("--vertices", type=int, default=256)
    evolve.add_argument("--iters", type=int, default=4000)
    evolve.add_argument("--tol", type=float, default=1e-9)
    evolve.add_argument("--out", type=str, default=None,
                        help="write the final curve vertices to this CSV path")
    evolve.set_defaults(func=_cmd_evolve)

    acrit = sub.add_parser("acrit", help="critical offset / critical mass")
    acrit.add_argument("--p", type=float, required=True)
    acrit.add_argument("--dim", type=int, choices=(1, 2, 3), required=True)
    acrit.add_argument("--mass", type=float, default=None)
    acrit.add_argument("--a", type=float, default=None)
    acrit.set_defaults(func=_cmd_acrit)

    verify = sub.add_parser("verify", help="run a named verification suite")
    verify.add_argument("suite", type=str)
    verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # argparse usage failure
        code = exc.code if isinstance(exc.code, int) else 1
        return code
    except (ValueError, AssertionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except NumericError as exc:
        sys.stderr.write(f"numeric failure: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"I/O error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
