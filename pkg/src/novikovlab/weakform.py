"""Space-time weak residuals of a trajectory against bump test functions.

For a test function ``phi`` the ``u`` residual is

    r_u = int int (u phi_t - B_u phi) dx dt + int u0 phi(0, x) dx

with ``B_u = -du/dt`` given by the nonlocal right-hand side (or any other
bracket passed in). Time integrals use the trapezoid rule over the recorded
states, space integrals the rectangle rule.
"""

from dataclasses import dataclass

import numpy as np

from .dynamics import rhs_uv
from .mollify import bump, bump_prime

MIN_SAMPLES_PER_SCALE = 4


class UnderResolvedError(ValueError):
    """Test-function support is too narrow for the record or grid spacing."""


@dataclass(eq=False)
class TestFunction:
    """Sampled ``phi`` and ``phi_t`` on a trajectory's (time, space) lattice."""

    __test__ = False  # not a pytest class

    t0: float
    x0: float
    st: float
    sx: float
    phi: np.ndarray
    phi_t: np.ndarray

    def __add__(self, other):
        return TestFunction(
            float("nan"), float("nan"),
            min(self.st, other.st), min(self.sx, other.sx),
            self.phi + other.phi, self.phi_t + other.phi_t,
        )

    def __mul__(self, alpha):
        return TestFunction(self.t0, self.x0, self.st, self.sx, alpha * self.phi, alpha * self.phi_t)

    __rmul__ = __mul__


def make_phi(t0, x0, st, sx, traj, interior=True):
    """``bump((t - t0)/st) * bump(d_L(x, x0)/sx)`` sampled on ``traj``."""
    if not (st > 0 and sx > 0):
        raise ValueError("test-function scales must be positive")
    grid = traj.grid
    times = np.asarray(traj.times)
    if interior:
        T = times[-1]
        if t0 - st < 0 or t0 + st > T:
            raise UnderResolvedError(
                f"time support [{t0 - st:.6g}, {t0 + st:.6g}] leaves [0, {T:.6g}]"
            )
        if sx >= grid.L / 2:
            raise UnderResolvedError(f"space support {sx:.6g} wraps the period {grid.L:.6g}")
    tau = (times - t0) / st
    psi = bump(tau)
    dpsi = bump_prime(tau) / st
    chi = bump(grid.circle_distance(x0) / sx)
    return TestFunction(t0, x0, st, sx, np.outer(psi, chi), np.outer(dpsi, chi))


def default_bracket(s):
    du, dv = rhs_uv(s)
    return -du, -dv


def bracket_history(traj, bracket=default_bracket):
    """Stack ``B_u``, ``B_v`` at every record."""
    bu, bv = zip(*(bracket(s) for s in traj.states))
    return np.array(bu), np.array(bv)


def trapezoid_weights(times):
    t = np.asarray(times, dtype=float)
    w = np.zeros_like(t)
    if t.size > 1:
        dt = np.diff(t)
        w[:-1] += dt / 2
        w[1:] += dt / 2
    return w


def check_resolution(traj, phi):
    times = np.asarray(traj.times)
    spacing = float(np.max(np.diff(times))) if times.size > 1 else np.inf
    if phi.st < MIN_SAMPLES_PER_SCALE * spacing:
        raise UnderResolvedError(
            f"time scale {phi.st:.4g} below {MIN_SAMPLES_PER_SCALE} x record spacing {spacing:.4g}"
        )
    if phi.sx < MIN_SAMPLES_PER_SCALE * traj.grid.dx:
        raise UnderResolvedError(
            f"space scale {phi.sx:.4g} below {MIN_SAMPLES_PER_SCALE} x dx {traj.grid.dx:.4g}"
        )


def weak_residual(traj, phi, brackets=None, bracket=default_bracket):
    """``(r_u, r_v)`` for one test function.

    ``brackets`` may carry a precomputed :func:`bracket_history` so that
    sweeps over many test functions evaluate the right-hand side once.
    """
    check_resolution(traj, phi)
    if brackets is None:
        brackets = bracket_history(traj, bracket)
    bu, bv = brackets
    w = trapezoid_weights(traj.times)
    dx = traj.grid.dx
    s0 = traj.states[0]
    out = []
    for field, b, f0 in ((traj.u_array(), bu, s0.u), (traj.v_array(), bv, s0.v)):
        per_time = np.einsum("ij,ij->i", field, phi.phi_t) - np.einsum("ij,ij->i", b, phi.phi)
        r = dx * float(np.dot(w, per_time)) + dx * float(np.dot(f0, phi.phi[0]))
        out.append(r)
    return tuple(out)


def lattice(traj, t_count, x_count, st, sx, t_margin=None, x_range=None):
    """Evenly spaced interior centres: ``t_count x x_count`` test functions."""
    T = traj.times[-1]
    lo = st if t_margin is None else t_margin
    t_centres = np.linspace(lo, T - lo, t_count) if t_count > 1 else np.array([T / 2])
    a, b = (0.0, traj.grid.L) if x_range is None else x_range
    x_centres = a + (np.arange(x_count) + 0.5) * (b - a) / x_count
    return [(float(t0), float(x0), st, sx) for t0 in t_centres for x0 in x_centres]


def residual_sweep(traj, centres, interior=True, bracket=default_bracket):
    """Rows ``(t0, x0, st, sx, r_u, r_v)`` for each ``(t0, x0, st, sx)`` in ``centres``."""
    phis = [make_phi(t0, x0, st, sx, traj, interior=interior) for t0, x0, st, sx in centres]
    for phi in phis:
        check_resolution(traj, phi)
    brackets = bracket_history(traj, bracket)
    rows = []
    for (t0, x0, st, sx), phi in zip(centres, phis):
        ru, rv = weak_residual(traj, phi, brackets=brackets)
        rows.append((t0, x0, st, sx, ru, rv))
    return rows
