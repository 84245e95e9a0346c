"""Mollified-data Cauchy study and continuous-dependence study."""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .diagnostics import SIGN_TOL, SignConditionError, error_norms, negativity
from .dynamics import State
from .grid import BlowUpError, h1_norm, lp_norm
from .helmholtz import helm_apply, helm_inv
from .mollify import check_resolution, mollify
from .stepper import CFLStarvationError, integrate

ENVELOPE_FACTOR = 20.0


def _run(s0, cfg):
    """Integrate and return ``(trajectory, status)``; never raises on blow-up."""
    try:
        return integrate(s0, cfg), "ok"
    except (BlowUpError, CFLStarvationError) as exc:
        return exc.trajectory, f"blowup@{exc.time:.6g}"


def _run_all(jobs, cfg, workers):
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run, jobs, [cfg] * len(jobs)))
    return [_run(s0, cfg) for s0 in jobs]


@dataclass
class ConvergenceRow:
    k: int
    d_k: float
    m_l1_err: float
    m_l2_err: float
    n_l1_err: float
    n_l2_err: float
    status: str

    columns = ("k", "d_k", "m_l1_err", "m_l2_err", "n_l1_err", "n_l2_err", "status")

    def row(self):
        return [getattr(self, c) for c in self.columns]


@dataclass
class ConvergenceTable:
    rows: list = field(default_factory=list)

    def distances(self):
        return [r.d_k for r in self.rows if not math.isnan(r.d_k)]

    def cauchy_ok(self, steps=2):
        """``d_k`` non-increasing over the last ``steps`` transitions."""
        d = self.distances()
        if len(d) < 2:
            return all(r.status == "ok" for r in self.rows)
        tail = d[-(steps + 1):]
        return all(b <= a for a, b in zip(tail, tail[1:]))


def _h1_gap(a, b):
    g = a.grid
    return h1_norm(g, a.u - b.u) + h1_norm(g, a.v - b.v)


def mollify_study(m0, n0, ks, cfg, workers=1):
    """Solve from ``rho_k`` smoothed potentials for each ``k`` and tabulate gaps.

    ``d_k`` is the largest (over shared record times) H^1 distance between the
    run for ``k`` and the run for the next ``k``, summed over both components.
    """
    grid = cfg.grid
    ks = [int(k) for k in ks]
    if not ks or any(b <= a for a, b in zip(ks, ks[1:])):
        raise ValueError(f"ks must be a non-empty increasing list, got {ks}")
    m0 = np.asarray(m0, dtype=float)
    n0 = np.asarray(n0, dtype=float)
    for name, p in (("m0", m0), ("n0", n0)):
        if p.shape != (grid.N,) or not np.all(np.isfinite(p)):
            raise ValueError(f"{name} must be {grid.N} finite samples")
        if negativity(p) > 1e-12:
            raise SignConditionError(f"{name} has negative part {negativity(p):.3e}")
    for k in ks:
        check_resolution(grid, k)

    data = []
    jobs = []
    for k in ks:
        mk, nk = mollify(grid, m0, k), mollify(grid, n0, k)
        data.append((
            lp_norm(grid, mk - m0, 1), lp_norm(grid, mk - m0, 2),
            lp_norm(grid, nk - n0, 1), lp_norm(grid, nk - n0, 2),
        ))
        jobs.append(State(grid, helm_inv(grid, mk), helm_inv(grid, nk)))
    runs = _run_all(jobs, cfg, workers)

    table = ConvergenceTable()
    for i, k in enumerate(ks):
        traj, status = runs[i]
        d_k = float("nan")
        if i + 1 < len(ks):
            nxt, nstatus = runs[i + 1]
            if status == "ok" and nstatus == "ok":
                d_k = max(_h1_gap(a, b) for a, b in zip(traj.states, nxt.states))
        table.rows.append(ConvergenceRow(k, d_k, *data[i], status))
    return table


@dataclass
class DependenceRow:
    delta: float
    a0: float
    a_t: float
    ratio: float
    c_hat: float
    c_env: float
    status: str

    columns = ("delta", "a0", "a_t", "ratio", "c_hat", "c_env", "status")

    def row(self):
        return [getattr(self, c) for c in self.columns]


@dataclass
class DependenceTable:
    rows: list = field(default_factory=list)

    def successive_ratios(self):
        a = [r.a_t for r in self.rows]
        return [x / y if y > 0 else float("nan") for x, y in zip(a, a[1:])]

    def linear_response_ok(self, lo=1.8, hi=2.2):
        """Neighbouring ``A(T)`` ratios lie in ``[lo, hi]``.

        The bounds are written for halving deltas and are rescaled by
        ``(d1 / d2) / 2`` when neighbouring deltas differ by another factor.
        """
        d = [r.delta for r in self.rows]
        out = []
        for q, d1, d2 in zip(self.successive_ratios(), d, d[1:]):
            scale = (d1 / d2) / 2.0 if d2 > 0 else float("nan")
            out.append(lo * scale <= q <= hi * scale)
        return all(out)

    def exponent_spread(self):
        c = [r.c_hat for r in self.rows if math.isfinite(r.c_hat)]
        if len(c) < 2:
            return 0.0
        return (max(c) - min(c)) / max(abs(x) for x in c)

    def within_envelope(self):
        return all(r.c_hat <= r.c_env for r in self.rows if math.isfinite(r.c_hat))


def unit_perturbation(grid, p):
    """Scale ``p`` so that the pair ``(p, p)`` has unit error norm."""
    zero = State(grid, grid.zeros(), grid.zeros())
    a = error_norms(State(grid, p, p), zero)
    if a == 0:
        raise ValueError("perturbation is identically zero")
    return np.asarray(p, dtype=float) / a


def _potential_bound(traj):
    """``sup_t (||m||_1 + ||m||_2 + ||n||_1 + ||n||_2)`` from the run's monitor reports."""
    return max(r.l1_m + r.l2_m + r.l1_n + r.l2_n for r in traj.diagnostics)


def cont_dependence(s0, deltas, perturbation, cfg, workers=1):
    """Base run versus runs from ``s0 + delta * (p, p)`` for each delta.

    The perturbation must already be unit-normalised (see
    :func:`unit_perturbation`), so ``A(0) = delta``. The envelope exponent is
    ``ENVELOPE_FACTOR * Lsup**2`` with ``Lsup`` the largest summed L^1 + L^2
    norm of both potentials seen on either run.
    """
    grid = cfg.grid
    deltas = [float(d) for d in deltas]
    if not deltas or any(d < 0 for d in deltas):
        raise ValueError(f"deltas must be non-negative, got {deltas}")
    if any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError(f"deltas must be strictly decreasing, got {deltas}")
    p = np.asarray(perturbation, dtype=float)
    zero = State(grid, grid.zeros(), grid.zeros())
    norm = error_norms(State(grid, p, p), zero)
    if abs(norm - 1.0) > 1e-6:
        raise ValueError(f"perturbation must be unit-normalised, its norm is {norm:.6g}")

    m0, n0 = helm_apply(grid, s0.u), helm_apply(grid, s0.v)
    pm = helm_apply(grid, p)
    big = max(deltas)
    for name, base in (("m0", m0), ("n0", n0)):
        scale = max(1.0, float(np.max(np.abs(base))))
        if negativity(base) > SIGN_TOL * scale:
            raise SignConditionError(f"base {name} is not non-negative")
        if negativity(base + big * pm) > SIGN_TOL * scale:
            raise SignConditionError(
                f"perturbed {name} at delta={big:g} breaks the sign condition"
            )

    jobs = [s0] + [State(grid, s0.u + d * p, s0.v + d * p) for d in deltas]
    runs = _run_all(jobs, cfg, workers)
    base, bstatus = runs[0]
    if bstatus != "ok":
        raise BlowUpError(f"base run failed: {bstatus}", trajectory=base)
    T = base.times[-1]

    table = DependenceTable()
    for d, (traj, status) in zip(deltas, runs[1:]):
        if status != "ok":
            table.rows.append(DependenceRow(d, d, float("nan"), float("nan"),
                                            float("nan"), float("nan"), status))
            continue
        a0 = error_norms(traj.states[0], base.states[0])
        a_t = error_norms(traj.final, base.final)
        lsup = max(_potential_bound(base), _potential_bound(traj))
        if a0 > 0:
            ratio = a_t / a0
            c_hat = math.log(ratio) / T if T > 0 and ratio > 0 else float("nan")
        else:
            ratio = c_hat = float("nan")
        table.rows.append(DependenceRow(d, a0, a_t, ratio, c_hat, ENVELOPE_FACTOR * lsup**2, status))
    return table
