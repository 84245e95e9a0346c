"""Classical RK4 integration of the nonlocal form."""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _accel
from .diagnostics import AprioriMonitor
from .dynamics import State, default_dealias, uv_rates
from .grid import BlowUpError, make_grid

BLOWUP_AMPLITUDE = 1e6
MIN_DT = 1e-12


class CFLStarvationError(RuntimeError):
    def __init__(self, message, time=None, trajectory=None):
        super().__init__(message)
        self.time = time
        self.trajectory = trajectory


@dataclass
class SolverConfig:
    """Run parameters. Give exactly one of ``dt`` (fixed step) or ``cfl`` (adaptive)."""

    T: float
    L: float
    N: int
    dt: float = None
    cfl: float = None
    dealias: bool = None
    record_every: int = 1

    def __post_init__(self):
        if not (self.T >= 0 and math.isfinite(self.T)):
            raise ValueError(f"T must be finite and non-negative, got {self.T!r}")
        if (self.dt is None) == (self.cfl is None):
            raise ValueError("give exactly one of dt and cfl")
        if self.dt is not None and not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if self.cfl is not None and not 0 < self.cfl <= 1:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl!r}")
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise ValueError(f"record_every must be a positive integer, got {self.record_every!r}")
        self.record_every = int(self.record_every)
        self.grid = make_grid(self.L, self.N)
        if self.dealias is None:
            self.dealias = default_dealias(self.grid)


@dataclass
class Trajectory:
    grid: object
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    steps: int = 0

    def append(self, t, s, report=None):
        if self.times and not t > self.times[-1]:
            raise ValueError("record times must increase")
        self.times.append(float(t))
        self.states.append(s)
        if report is not None:
            self.diagnostics.append(report)

    @property
    def final(self):
        return self.states[-1]

    def u_array(self):
        return np.array([s.u for s in self.states])

    def v_array(self):
        return np.array([s.v for s in self.states])


def _check_amplitude(u, v, t):
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise BlowUpError(f"non-finite samples at t={t:.6g}", time=t)
    amp = max(float(np.max(np.abs(u))), float(np.max(np.abs(v))))
    if amp > BLOWUP_AMPLITUDE:
        raise BlowUpError(f"amplitude {amp:.3e} exceeds {BLOWUP_AMPLITUDE:g} at t={t:.6g}", time=t)


def _rk4(grid, u, v, h, dealias):
    k1u, k1v = uv_rates(grid, u, v, dealias)
    k2u, k2v = uv_rates(grid, _accel.axpy(u, k1u, h / 2), _accel.axpy(v, k1v, h / 2), dealias)
    k3u, k3v = uv_rates(grid, _accel.axpy(u, k2u, h / 2), _accel.axpy(v, k2v, h / 2), dealias)
    k4u, k4v = uv_rates(grid, _accel.axpy(u, k3u, h), _accel.axpy(v, k3v, h), dealias)
    return (
        _accel.rk4_combine(u, k1u, k2u, k3u, k4u, h),
        _accel.rk4_combine(v, k1v, k2v, k3v, k4v, h),
    )


def step_rk4(s, dt, dealias=None):
    """One RK4 step of the nonlocal form. Negative ``dt`` integrates backwards."""
    if not (dt != 0 and math.isfinite(dt)):
        raise ValueError(f"dt must be finite and non-zero, got {dt!r}")
    if dealias is None:
        dealias = default_dealias(s.grid)
    u, v = _rk4(s.grid, s.u, s.v, dt, dealias)
    _check_amplitude(u, v, None)
    return State(s.grid, u, v)


def integrate(s0, cfg, backward=False, monitor=True):
    """Advance ``s0`` to ``cfg.T``; ``backward`` flips the sign of every step.

    On blow-up the raised BlowUpError carries the partial trajectory and the
    last finite state.
    """
    grid = cfg.grid
    if s0.grid != grid:
        raise ValueError(f"initial state grid {s0.grid} does not match config grid {grid}")
    sign = -1.0 if backward else 1.0
    mon = AprioriMonitor(s0) if monitor else None
    traj = Trajectory(grid)
    traj.append(0.0, s0, mon.check(s0, 0.0) if mon else None)

    T = float(cfg.T)
    u, v = s0.u, s0.v
    t = 0.0
    step = 0
    if cfg.dt is not None:
        nsteps = max(0, math.ceil(T / cfg.dt - 1e-9))
    while True:
        if cfg.dt is not None:
            if step >= nsteps:
                break
            t_next = T if step == nsteps - 1 else (step + 1) * cfg.dt
        else:
            if t >= T:
                break
            dt = cfg.cfl * grid.dx / max(1.0, _accel.max_abs_product(u, v))
            if dt < MIN_DT:
                raise CFLStarvationError(
                    f"adaptive step {dt:.3e} fell below {MIN_DT:g} at t={t:.6g}",
                    time=t, trajectory=traj,
                )
            t_next = T if t + dt >= T * (1 - 1e-14) else t + dt
        h = t_next - t
        try:
            un, vn = _rk4(grid, u, v, sign * h, cfg.dealias)
            _check_amplitude(un, vn, t_next)
        except BlowUpError as exc:
            exc.time = t_next
            exc.state = State(grid, u, v)
            exc.trajectory = traj
            raise
        u, v, t = un, vn, t_next
        step += 1
        done = (t >= T) if cfg.dt is None else (step >= nsteps)
        if step % cfg.record_every == 0 or done:
            s = State(grid, u, v)
            traj.append(t, s, mon.check(s, t) if mon else None)
    traj.steps = step
    return traj
