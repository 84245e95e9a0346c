"""Periodic 1-D sample lattice and the calculus used by every other module.

Fields are plain ``float64`` arrays of length ``grid.N``; operations take the
grid explicitly.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np


class BlowUpError(FloatingPointError):
    """Non-finite samples (or runaway amplitude) showed up in a field."""

    def __init__(self, message, time=None, state=None, trajectory=None):
        super().__init__(message)
        self.time = time
        self.state = state
        self.trajectory = trajectory


@dataclass(frozen=True)
class Grid:
    """Uniform periodic lattice ``x_j = j*dx`` on ``[0, L)``."""

    L: float
    N: int

    def __post_init__(self):
        if not np.isfinite(self.L) or self.L <= 0:
            raise ValueError(f"domain length must be positive, got {self.L!r}")
        n = self.N
        if int(n) != n or n < 16 or (int(n) & (int(n) - 1)) != 0:
            raise ValueError(f"N must be a power of two >= 16, got {n!r}")
        object.__setattr__(self, "L", float(self.L))
        object.__setattr__(self, "N", int(n))

    @property
    def dx(self):
        return self.L / self.N

    @cached_property
    def x(self):
        x = np.arange(self.N) * self.dx
        x.setflags(write=False)
        return x

    @cached_property
    def k(self):
        """Angular wavenumbers of the ``rfft`` modes, ``2*pi*j/L``."""
        k = 2.0 * np.pi * np.arange(self.N // 2 + 1) / self.L
        k.setflags(write=False)
        return k

    @cached_property
    def ik(self):
        """Derivative multiplier with the Nyquist mode zeroed."""
        ik = 1j * self.k
        ik[-1] = 0.0
        ik.setflags(write=False)
        return ik

    def circle_distance(self, x0):
        """Periodic distance ``d_L(x_j, x0)`` for every sample."""
        d = np.abs(np.mod(self.x - x0, self.L))
        return np.minimum(d, self.L - d)

    def zeros(self):
        return np.zeros(self.N)

    def constant(self, value):
        return np.full(self.N, float(value))


def make_grid(L, N):
    return Grid(L, N)


def check_field(grid, f, name="field"):
    """Return ``f`` as a float array after shape and finiteness checks."""
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (grid.N,):
        raise ValueError(f"{name} has shape {f.shape}, expected ({grid.N},)")
    if not np.all(np.isfinite(f)):
        raise BlowUpError(f"{name} contains non-finite samples")
    return f


def deriv(grid, f):
    """Spectral first derivative; exact for band-limited periodic ``f``."""
    return np.fft.irfft(grid.ik * np.fft.rfft(f), grid.N)


def integrate_x(grid, f):
    """Rectangle rule ``dx * sum(f)`` over one period."""
    return grid.dx * float(np.sum(f))


def lp_norm(grid, f, p=2):
    """Discrete L^p norm; ``p=np.inf`` gives the sample maximum of ``|f|``."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p!r}")
    a = np.abs(np.asarray(f, dtype=np.float64))
    if np.isinf(p):
        return float(a.max()) if a.size else 0.0
    if p == 1:
        return grid.dx * float(a.sum())
    if p == 2:
        return float(np.sqrt(grid.dx * np.dot(a, a)))
    return float((grid.dx * np.sum(a**p)) ** (1.0 / p))


def h1_norm(grid, f):
    fx = deriv(grid, f)
    return float(np.sqrt(grid.dx * (np.dot(f, f) + np.dot(fx, fx))))
