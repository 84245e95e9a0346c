"""Initial data selected by a RunConfig."""

import numpy as np

from . import exact
from .config import ConfigError
from .dynamics import State
from .helmholtz import helm_apply, helm_inv
from .io import read_snapshot

OUTSIDE_THEORY = (
    "raw peakon data has a point-mass potential, outside the L^1 and L^2 "
    "class covered by the global weak-solution theory"
)


def centre(rc, grid):
    return grid.L / 2 if rc["center"] is None else float(rc["center"])


def gaussian_potential(grid, amplitude, width, x0):
    return amplitude * np.exp(-(grid.circle_distance(x0) / width) ** 2)


def build(rc, grid, mollifier_n=None):
    """Return ``(state, m0, n0, warnings)``.

    ``m0, n0`` are the sampled potentials the data was built from when that
    is how it was built, otherwise ``u - u_xx`` evaluated spectrally.
    """
    sel = rc["initial"]
    c = float(rc["c"])
    x0 = centre(rc, grid)
    av = rc["amplitude-v"] if rc["amplitude-v"] is not None else rc["amplitude"]
    warnings = []
    if sel == "peakon":
        s = exact.peakon(c, 0.0, grid, x0=x0)
        warnings.append(OUTSIDE_THEORY)
    elif sel == "periodic-peakon":
        s = exact.periodic_peakon(c, 0.0, grid)
        warnings.append(OUTSIDE_THEORY)
    elif sel == "mollified-peakon":
        n = mollifier_n or rc["mollifier-n"]
        m = exact.mollified_peakon_potential(c, n, grid, x0)
        return State(grid, helm_inv(grid, m), helm_inv(grid, m)), m, m.copy(), warnings
    elif sel in ("gaussian-potentials", "peaked-potentials"):
        w = float(rc["width"])
        if sel == "gaussian-potentials":
            m = gaussian_potential(grid, rc["amplitude"], w, x0)
            n = gaussian_potential(grid, av, w, x0)
        else:
            d = grid.circle_distance(x0)
            m = rc["amplitude"] * np.exp(-d / w)
            n = av * np.exp(-d / w)
        return State(grid, helm_inv(grid, m), helm_inv(grid, n)), m, n, warnings
    elif sel == "from-file":
        try:
            s, _ = read_snapshot(rc["initial-file"])
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot load initial-file: {exc}") from exc
        if s.grid != grid:
            raise ConfigError(
                f"initial-file grid (L={s.grid.L}, N={s.grid.N}) does not match "
                f"config (L={grid.L}, N={grid.N})"
            )
    else:  # pragma: no cover - schema rejects other values
        raise ConfigError(f"unknown initial selector {sel!r}")
    return s, helm_apply(grid, s.u), helm_apply(grid, s.v), warnings
