"""Closed-form peakons and their mollified versions."""

import math

import numpy as np

from .dynamics import State
from .helmholtz import helm_inv
from .mollify import mollifier


def peakon(c, t, grid, x0=0.0):
    """Line peakon ``sqrt(c) exp(-|x - x0 - c t|)``, wrapped onto the circle."""
    if not c > 0:
        raise ValueError(f"peakon speed must be positive, got {c!r}")
    crest = np.mod(x0 + c * t, grid.L)
    u = math.sqrt(c) * np.exp(-grid.circle_distance(crest))
    return State(grid, u, u.copy())


def periodic_peakon_profile(c, t, x):
    """``sqrt(c)/cosh(pi) * cosh(x - c t - 2 pi floor((x - c t)/(2 pi)) - pi)``."""
    z = np.asarray(x, dtype=float) - c * t
    return math.sqrt(c) / math.cosh(math.pi) * np.cosh(
        z - 2.0 * math.pi * np.floor(z / (2.0 * math.pi)) - math.pi
    )


def periodic_peakon(c, t, grid):
    if not c > 0:
        raise ValueError(f"peakon speed must be positive, got {c!r}")
    if abs(grid.L - 2.0 * math.pi) > 1e-12:
        raise ValueError(f"periodic peakon needs L = 2*pi, got L = {grid.L!r}")
    u = periodic_peakon_profile(c, t, grid.x)
    return State(grid, u, u.copy())


def mollified_peakon_potential(c, n, grid, x0=0.0):
    """``2 sqrt(c) rho_n(x - x0)``, the smoothed point-mass potential of a peakon."""
    if not c > 0:
        raise ValueError(f"peakon speed must be positive, got {c!r}")
    return 2.0 * math.sqrt(c) * mollifier(n, grid, center=x0)


def mollified_peakon(c, n, grid, x0=0.0):
    """Peakon at ``t = 0`` smoothed by ``rho_n``.

    The smoothing is applied to the peakon's potential, the point mass
    ``2 sqrt(c) delta_{x0}``, giving ``m = 2 sqrt(c) rho_n(x - x0) >= 0``; the
    velocity is ``(1 - d_xx)^{-1} m``. In the continuum this equals
    ``rho_n * peakon`` and keeps the potentials sign-definite on the grid.
    """
    u = helm_inv(grid, mollified_peakon_potential(c, n, grid, x0))
    return State(grid, u, u.copy())


def crest_position(grid, f):
    """Grid location of ``argmax f``."""
    return float(grid.x[int(np.argmax(f))])


def circular_displacement(grid, x_from, x_to):
    """Signed shift from ``x_from`` to ``x_to`` in ``[-L/2, L/2)``."""
    d = np.mod(x_to - x_from + grid.L / 2, grid.L) - grid.L / 2
    return float(d)
