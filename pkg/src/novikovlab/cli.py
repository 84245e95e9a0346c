"""Command-line entry point.

Exit codes: 0 success, 1 config or usage error, 2 solver blow-up,
3 acceptance-property failure. Diagnostics go to stderr as one JSON object
per line.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import exact, initial, lab, weakform
from .config import ConfigError, load_document, resolve
from .diagnostics import CSV_COLUMNS, SignConditionError
from .grid import BlowUpError, lp_norm
from .helmholtz import helm_inv
from .io import write_csv, write_snapshot
from .stepper import CFLStarvationError, integrate

EXIT_OK, EXIT_CONFIG, EXIT_BLOWUP, EXIT_PROPERTY = 0, 1, 2, 3
COMMANDS = ("simulate", "peakon-validate", "weak-check", "mollify-study", "depend")


def emit(level, kind, message, **extra):
    rec = {"level": level, "kind": kind, "message": str(message)}
    rec.update(extra)
    print(json.dumps(rec, sort_keys=True), file=sys.stderr)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        emit("error", "usage", message)
        raise SystemExit(EXIT_CONFIG)


def build_parser():
    p = _Parser(prog="novikovlab", description="Two-component Novikov system laboratory")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, metavar="PATH")
        sp.add_argument("--out", required=True, metavar="DIR")
        sp.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")
    return p


# ------------------------------------------------------------------ commands

def _write_run(out, traj, rc, snapshots=True):
    write_csv(os.path.join(out, "diagnostics.csv"), CSV_COLUMNS,
              [r.row() for r in traj.diagnostics])
    if snapshots:
        snapdir = os.path.join(out, "snapshots")
        os.makedirs(snapdir, exist_ok=True)
        for i, (t, s) in enumerate(zip(traj.times, traj.states)):
            write_snapshot(os.path.join(snapdir, f"snap_{i:05d}.csv"), s, t)


def cmd_simulate(rc, out):
    cfg = rc.solver()
    s0, _, _, warns = initial.build(rc, cfg.grid)
    for w in warns:
        emit("warning", "data", w)
    try:
        traj = integrate(s0, cfg)
    except (BlowUpError, CFLStarvationError) as exc:
        _write_run(out, exc.trajectory, rc, rc["snapshots"])
        emit("error", "blowup", exc, time=exc.time)
        return EXIT_BLOWUP
    _write_run(out, traj, rc, rc["snapshots"])
    return EXIT_OK


def _reference(rc, grid, t, x0):
    c = float(rc["c"])
    if rc["initial"] == "periodic-peakon":
        return exact.periodic_peakon(c, t, grid)
    return exact.peakon(c, t, grid, x0=x0)


def cmd_peakon_validate(rc, out):
    c = float(rc["c"])
    rows, summary = [], []
    warned = False
    for level in range(rc["levels"]):
        f = 2**level
        points = rc["points"] * f
        dt = rc["dt"] / f if rc["dt"] is not None else None
        cfg = rc.solver(points=points, dt=dt)
        cfg.record_every = rc["record-every"] * f
        n = rc["mollifier-n"] * f
        s0, _, _, warns = initial.build(rc, cfg.grid, mollifier_n=n)
        if warns and not warned:
            for w in warns:
                emit("warning", "data", w)
            warned = True
        x0 = initial.centre(rc, cfg.grid)
        try:
            traj = integrate(s0, cfg, monitor=False)
        except (BlowUpError, CFLStarvationError) as exc:
            emit("error", "blowup", exc, time=exc.time, level=level)
            return EXIT_BLOWUP
        crest0 = exact.crest_position(cfg.grid, s0.u)
        for t, s in zip(traj.times, traj.states):
            ref = _reference(rc, cfg.grid, t, x0)
            err = max(lp_norm(cfg.grid, s.u - ref.u, np.inf), lp_norm(cfg.grid, s.v - ref.v, np.inf))
            shift = exact.circular_displacement(cfg.grid, crest0, exact.crest_position(cfg.grid, s.u))
            rows.append((level, points, n, t, err, shift, c * t))
        final = rows[-1][4]
        ratio = summary[-1][4] / final if summary and final > 0 else float("nan")
        summary.append((level, points, n, cfg.dt if cfg.dt is not None else float("nan"), final, ratio))
    write_csv(os.path.join(out, "peakon_error.csv"),
              ("level", "points", "mollifier_n", "time", "sup_error", "crest_shift", "expected_shift"), rows)
    write_csv(os.path.join(out, "peakon_levels.csv"),
              ("level", "points", "mollifier_n", "dt", "final_sup_error", "ratio"), summary)
    ok = summary[-1][4] <= rc["tolerance"]
    for row in summary[1:]:
        prev_zero = row[4] == 0 and summary[row[0] - 1][4] == 0
        ok = ok and (prev_zero or row[5] >= rc["min-ratio"])
    if not ok:
        emit("error", "property", "peakon transport check failed",
             final_sup_error=summary[-1][4], ratios=[r[5] for r in summary[1:]])
        return EXIT_PROPERTY
    return EXIT_OK


def _sweep_centres(rc, grid):
    T = rc["t-final"]
    st, sx = rc["sweep-st"], rc["sweep-sx"]
    nt, nx = rc["sweep-t-count"], rc["sweep-x-count"]
    t_centres = np.linspace(st, T - st, nt) if nt > 1 else np.array([T / 2])
    a = 0.0 if rc["sweep-x-min"] is None else rc["sweep-x-min"]
    b = grid.L if rc["sweep-x-max"] is None else rc["sweep-x-max"]
    x_centres = a + (np.arange(nx) + 0.5) * (b - a) / nx
    rng = np.random.default_rng(rc["seed"])
    jitter = rc["sweep-jitter"] * sx * rng.uniform(-1.0, 1.0, size=nx)
    return [(float(t0), float(x0 + j), st, sx) for t0 in t_centres for x0, j in zip(x_centres, jitter)]


def _check_sweep(rc, grid):
    T, st, sx = rc["t-final"], rc["sweep-st"], rc["sweep-sx"]
    if rc["interior"]:
        if st * 2 > T + 1e-12:
            raise ConfigError(f"sweep-st={st} leaves (0, {T}) in interior mode")
        if sx >= grid.L / 2:
            raise ConfigError(f"sweep-sx={sx} wraps the period in interior mode")
    if rc["dt"] is not None:
        spacing = rc["dt"] * rc["record-every"]
        if st < weakform.MIN_SAMPLES_PER_SCALE * spacing:
            raise ConfigError(f"sweep-st={st} is under-resolved by record spacing {spacing}")
    if sx < weakform.MIN_SAMPLES_PER_SCALE * grid.dx:
        raise ConfigError(f"sweep-sx={sx} is under-resolved by dx={grid.dx}")


def cmd_weak_check(rc, out):
    rows, maxima = [], []
    centres = None
    for level in range(rc["levels"]):
        f = 2**level
        cfg = rc.solver(points=rc["points"] * f,
                        dt=rc["dt"] / f if rc["dt"] is not None else None)
        if centres is None:
            centres = _sweep_centres(rc, cfg.grid)
        s0, _, _, _ = initial.build(rc, cfg.grid)
        try:
            traj = integrate(s0, cfg, monitor=False)
        except (BlowUpError, CFLStarvationError) as exc:
            emit("error", "blowup", exc, time=exc.time, level=level)
            return EXIT_BLOWUP
        try:
            res = weakform.residual_sweep(traj, centres, interior=rc["interior"])
        except weakform.UnderResolvedError as exc:
            emit("error", "config", exc)
            return EXIT_CONFIG
        rows.extend((level,) + r for r in res)
        maxima.append(max(max(abs(r[4]), abs(r[5])) for r in res))
    write_csv(os.path.join(out, "residuals.csv"),
              ("level", "t0", "x0", "st", "sx", "r_u", "r_v"), rows)
    ok = maxima[-1] <= rc["residual-bound"]
    ok = ok and all(b < a or (a == 0 and b == 0) for a, b in zip(maxima, maxima[1:]))
    if not ok:
        emit("error", "property", "weak residual check failed", maxima=maxima)
        return EXIT_PROPERTY
    return EXIT_OK


def cmd_mollify_study(rc, out):
    cfg = rc.solver()
    _, m0, n0, _ = initial.build(rc, cfg.grid)
    try:
        table = lab.mollify_study(m0, n0, rc["ks"], cfg, workers=rc["workers"])
    except SignConditionError as exc:
        emit("error", "config", exc)
        return EXIT_CONFIG
    write_csv(os.path.join(out, "convergence.csv"), lab.ConvergenceRow.columns,
              [r.row() for r in table.rows])
    if not table.cauchy_ok():
        emit("error", "property", "d_k is not non-increasing", d_k=table.distances())
        return EXIT_PROPERTY
    return EXIT_OK


def cmd_depend(rc, out):
    cfg = rc.solver()
    grid = cfg.grid
    s0, _, _, _ = initial.build(rc, grid)
    pc = grid.L / 2 if rc["perturbation-center"] is None else rc["perturbation-center"]
    p = lab.unit_perturbation(
        grid, helm_inv(grid, initial.gaussian_potential(grid, 1.0, rc["perturbation-width"], pc))
    )
    try:
        table = lab.cont_dependence(s0, rc["deltas"], p, cfg, workers=rc["workers"])
    except SignConditionError as exc:
        emit("error", "config", exc)
        return EXIT_CONFIG
    except BlowUpError as exc:
        emit("error", "blowup", exc)
        return EXIT_BLOWUP
    write_csv(os.path.join(out, "dependence.csv"), lab.DependenceRow.columns,
              [r.row() for r in table.rows])
    ok = (table.linear_response_ok(rc["ratio-min"], rc["ratio-max"])
          and table.within_envelope()
          and table.exponent_spread() <= rc["exponent-spread"])
    if not ok:
        emit("error", "property", "continuous-dependence check failed",
             ratios=table.successive_ratios(), spread=table.exponent_spread())
        return EXIT_PROPERTY
    return EXIT_OK


HANDLERS = {
    "simulate": cmd_simulate,
    "peakon-validate": cmd_peakon_validate,
    "weak-check": cmd_weak_check,
    "mollify-study": cmd_mollify_study,
    "depend": cmd_depend,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        rc = resolve(args.command, load_document(args.config), args.override)
        grid = rc.solver().grid
        if args.command == "weak-check":
            _check_sweep(rc, grid)
        # surfaces from-file and data errors before anything is written
        initial.build(rc, grid)
    except (ConfigError, ValueError) as exc:
        emit("error", "config", exc)
        return EXIT_CONFIG
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "config.yaml"), "w") as fh:
        fh.write(rc.dump())
    return HANDLERS[args.command](rc, args.out)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
