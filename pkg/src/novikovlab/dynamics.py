"""Right-hand sides of the two-component Novikov system.

Two equivalent forms are provided:

* potential form, ``m_t = -(3 u_x v m + u v m_x)`` and the mirror for ``n``;
* nonlocal form, ``u_t = -(g_x*(u v m) + g*((2 u_x v - u v_x) m))`` with
  ``g*`` the inverse Helmholtz operator, and the mirror for ``v``.

The nonlocal form drives time stepping. With ``dealias`` on, every cubic
product is evaluated on a zero-padded lattice of ``2N`` points and truncated
back, which removes all aliasing from products of three band-limited fields;
the Nyquist mode is dropped from products in that mode.
"""

from dataclasses import dataclass

import numpy as np

from . import _accel
from .grid import Grid, check_field
from .helmholtz import _symbols, helm_apply, helm_inv

DEALIAS_MIN_N = 256


def default_dealias(grid):
    return grid.N >= DEALIAS_MIN_N


@dataclass(frozen=True, eq=False)
class State:
    """Velocity pair ``(u, v)`` sampled on one grid."""

    grid: Grid
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "u", check_field(self.grid, self.u, "u"))
        object.__setattr__(self, "v", check_field(self.grid, self.v, "v"))

    def swapped(self):
        return State(self.grid, self.v, self.u)

    def scaled(self, alpha):
        return State(self.grid, alpha * self.u, alpha * self.v)

    def shifted(self, steps):
        """Circular shift by an integer number of grid points."""
        return State(self.grid, np.roll(self.u, steps), np.roll(self.v, steps))


@dataclass(frozen=True, eq=False)
class Potentials:
    """``m = u - u_xx`` and ``n = v - v_xx``."""

    grid: Grid
    m: np.ndarray
    n: np.ndarray

    @classmethod
    def from_state(cls, s):
        p = cls(s.grid, helm_apply(s.grid, s.u), helm_apply(s.grid, s.v))
        scale = max(1.0, float(np.max(np.abs(s.u))), float(np.max(np.abs(s.v))))
        back = np.max(np.abs(helm_inv(s.grid, p.m) - s.u))
        assert back <= 1e-9 * scale, f"potential round trip off by {back:.3e}"
        return p


def potentials(s):
    return Potentials.from_state(s)


# ------------------------------------------------------------ spectral glue

def _physical(grid, fh, dealias):
    """Physical samples of a spectrum on the product lattice."""
    if not dealias:
        return np.fft.irfft(fh, grid.N)
    n2 = grid.N // 2
    padded = np.zeros(grid.N + 1, dtype=np.complex128)
    padded[:n2] = fh[:n2]
    return np.fft.irfft(padded, 2 * grid.N) * 2.0


def _spectrum(grid, f, dealias):
    """Spectrum on the base lattice of a product evaluated by :func:`_physical`."""
    if not dealias:
        return np.fft.rfft(f)
    fh = np.fft.rfft(f)[: grid.N // 2 + 1] * 0.5
    fh[-1] = 0.0
    return fh


def _expand(grid, uh, dealias):
    """``(u, u_x, u - u_xx)`` on the product lattice from a spectrum."""
    k2, _, _ = _symbols(grid)
    return (
        _physical(grid, uh, dealias),
        _physical(grid, grid.ik * uh, dealias),
        _physical(grid, (1.0 + k2) * uh, dealias),
    )


def _nonlocal_rate(grid, a, b, ax, bx, pa, dealias):
    _, inv, dinv = _symbols(grid)
    flux, src = _accel.nonlocal_sources(a, b, ax, bx, pa)
    rate = dinv * _spectrum(grid, flux, dealias) + inv * _spectrum(grid, src, dealias)
    return np.fft.irfft(-rate, grid.N)


def uv_rates(grid, u, v, dealias):
    """Array-level nonlocal right-hand side; used inside the integrator."""
    u_, ux, m = _expand(grid, np.fft.rfft(u), dealias)
    v_, vx, n = _expand(grid, np.fft.rfft(v), dealias)
    du = _nonlocal_rate(grid, u_, v_, ux, vx, m, dealias)
    dv = _nonlocal_rate(grid, v_, u_, vx, ux, n, dealias)
    return du, dv


def rhs_uv(s, dealias=None):
    """``(du/dt, dv/dt)`` from the nonlocal form."""
    if dealias is None:
        dealias = default_dealias(s.grid)
    return uv_rates(s.grid, s.u, s.v, dealias)


def rhs_m(s, p=None, dealias=None):
    """``(dm/dt, dn/dt)`` from the potential form."""
    grid = s.grid
    if dealias is None:
        dealias = default_dealias(grid)
    if p is None:
        p = potentials(s)
    uh, vh = np.fft.rfft(s.u), np.fft.rfft(s.v)
    mh, nh = np.fft.rfft(p.m), np.fft.rfft(p.n)
    u_ = _physical(grid, uh, dealias)
    v_ = _physical(grid, vh, dealias)
    ux = _physical(grid, grid.ik * uh, dealias)
    vx = _physical(grid, grid.ik * vh, dealias)
    m_ = _physical(grid, mh, dealias)
    n_ = _physical(grid, nh, dealias)
    mx = _physical(grid, grid.ik * mh, dealias)
    nx = _physical(grid, grid.ik * nh, dealias)
    dm = _accel.local_rate(u_, v_, ux, m_, mx)
    dn = _accel.local_rate(v_, u_, vx, n_, nx)
    dm = np.fft.irfft(_spectrum(grid, dm, dealias), grid.N)
    dn = np.fft.irfft(_spectrum(grid, dn, dealias), grid.N)
    return dm, dn

