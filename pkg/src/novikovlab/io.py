"""CSV tables and per-record snapshot files."""

import csv
import math

import numpy as np

from .dynamics import State
from .grid import make_grid


def fmt(value):
    """17 significant digits for floats; everything else via ``str``."""
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return "nan"
        return "%.17g" % value
    return str(value)


def write_csv(path, columns, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([fmt(v) for v in r])


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def write_snapshot(path, state, time):
    g = state.grid
    with open(path, "w", newline="") as fh:
        fh.write(f"# time = {fmt(float(time))}\n")
        fh.write(f"# length = {fmt(g.L)}\n")
        fh.write(f"# points = {g.N}\n")
        fh.write(f"# dx = {fmt(g.dx)}\n")
        fh.write("# x_j = j * dx, j = 0 .. points-1\n")
        fh.write("u,v\n")
        for a, b in zip(state.u, state.v):
            fh.write(f"{fmt(float(a))},{fmt(float(b))}\n")


def read_snapshot(path):
    """Return ``(state, time)`` from a file written by :func:`write_snapshot`."""
    meta = {}
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "=" in line and not line.startswith("# x_j"):
                    key, val = line[1:].split("=", 1)
                    meta[key.strip()] = val.strip()
                continue
            if line == "u,v":
                continue
            a, b = line.split(",")
            rows.append((float(a), float(b)))
    try:
        grid = make_grid(float(meta["length"]), int(meta["points"]))
    except KeyError as exc:
        raise ValueError(f"snapshot {path} lacks header key {exc}") from None
    data = np.array(rows, dtype=float).reshape(-1, 2)
    if data.shape[0] != grid.N:
        raise ValueError(f"snapshot {path} has {data.shape[0]} rows, header says {grid.N}")
    return State(grid, data[:, 0].copy(), data[:, 1].copy()), float(meta.get("time", 0.0))
