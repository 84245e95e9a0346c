"""Energy, sign and a priori norm monitors attached to trajectories."""

from dataclasses import dataclass, field, fields

import numpy as np

from .grid import deriv, h1_norm, integrate_x, lp_norm
from .helmholtz import helm_apply
from .mollify import mollify

SIGN_TOL = 1e-10
DEFAULT_SLACK = 0.02
# sup|f| <= SOBOLEV * ||f||_{H^1} on the line
SOBOLEV = np.sqrt(2.0) / 2.0

CSV_COLUMNS = (
    "time", "E", "l1_m", "l2_m", "l1_n", "l2_n",
    "sup_u", "sup_ux", "sup_v", "sup_vx", "h1_u", "h1_v",
    "neg_m", "neg_n", "flags",
)


class SignConditionError(ValueError):
    """Initial potentials are not non-negative."""


@dataclass
class Report:
    time: float
    E: float
    l1_m: float
    l2_m: float
    l1_n: float
    l2_n: float
    sup_u: float
    sup_ux: float
    sup_v: float
    sup_vx: float
    h1_u: float
    h1_v: float
    neg_m: float
    neg_n: float
    flags: list = field(default_factory=list)

    def row(self):
        """Values in the CSV column order; flags joined with ``;``."""
        vals = [getattr(self, f.name) for f in fields(self) if f.name != "flags"]
        return vals + [";".join(self.flags)]


def energy(s):
    """``E(u, v) = int (u v + u_x v_x) dx``."""
    g = s.grid
    return integrate_x(g, s.u * s.v + deriv(g, s.u) * deriv(g, s.v))


def negativity(f):
    return max(0.0, -float(np.min(f)))


def _chain(grid, w, wx, pot, h1_0, E0, t, slack, tag):
    """Flags for one component: sup chain then L^p bounds by the potential."""
    flags = []

    def le(a, b):
        return a <= (1.0 + slack) * b

    sup_w, sup_wx = lp_norm(grid, w, np.inf), lp_norm(grid, wx, np.inf)
    h1 = float(np.sqrt(grid.dx * (np.dot(w, w) + np.dot(wx, wx))))
    with np.errstate(over="ignore"):
        growth = h1_0 * np.exp(E0 * t)
    if not le(sup_wx, sup_w):
        flags.append(f"{tag}:sup_x<=sup")
    if not le(sup_w, SOBOLEV * h1):
        flags.append(f"{tag}:sup<=h1")
    if not le(h1, growth):
        flags.append(f"{tag}:h1<=growth")
    for p in (1, 2):
        lp_pot = lp_norm(grid, pot, p)
        if not le(lp_norm(grid, w, p), lp_pot):
            flags.append(f"{tag}:l{p}<=pot")
        if not le(lp_norm(grid, wx, p), lp_pot):
            flags.append(f"{tag}:l{p}_x<=pot")
    return flags, sup_w, sup_wx, h1


class AprioriMonitor:
    """Evaluates the norm chains relative to a fixed initial state."""

    def __init__(self, s0, slack=DEFAULT_SLACK):
        self.slack = slack
        self.E0 = energy(s0)
        self.h1_u0 = h1_norm(s0.grid, s0.u)
        self.h1_v0 = h1_norm(s0.grid, s0.v)

    def check(self, s, t):
        g = s.grid
        m, n = helm_apply(g, s.u), helm_apply(g, s.v)
        ux, vx = deriv(g, s.u), deriv(g, s.v)
        fu, sup_u, sup_ux, h1_u = _chain(g, s.u, ux, m, self.h1_u0, self.E0, t, self.slack, "u")
        fv, sup_v, sup_vx, h1_v = _chain(g, s.v, vx, n, self.h1_v0, self.E0, t, self.slack, "v")
        return Report(
            time=float(t),
            E=integrate_x(g, s.u * s.v + ux * vx),
            l1_m=lp_norm(g, m, 1), l2_m=lp_norm(g, m, 2),
            l1_n=lp_norm(g, n, 1), l2_n=lp_norm(g, n, 2),
            sup_u=sup_u, sup_ux=sup_ux, sup_v=sup_v, sup_vx=sup_vx,
            h1_u=h1_u, h1_v=h1_v,
            neg_m=negativity(m), neg_n=negativity(n),
            flags=fu + fv,
        )


@dataclass
class AprioriResult:
    reports: list
    exponents: dict

    @property
    def flagged(self):
        return [r for r in self.reports if r.flags]


def fitted_exponent(times, values):
    """Smallest ``a`` with ``values[i] <= exp(a t_i) values[0]`` at every ``t_i > 0``."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    pos = times > 0
    if not pos.any() or values[0] <= 0:
        return float("nan")
    with np.errstate(divide="ignore"):
        rates = np.log(values[pos] / values[0]) / times[pos]
    return float(np.max(rates))


def apriori_report(traj, slack=DEFAULT_SLACK):
    """Monitor reports for every record plus fitted growth exponents.

    Raises SignConditionError when the initial potentials are negative,
    since the chains are only claimed for sign-definite data.
    """
    s0 = traj.states[0]
    m0, n0 = helm_apply(s0.grid, s0.u), helm_apply(s0.grid, s0.v)
    for name, p in (("m0", m0), ("n0", n0)):
        scale = max(1.0, float(np.max(np.abs(p))))
        if negativity(p) > SIGN_TOL * scale:
            raise SignConditionError(
                f"{name} has negative part {negativity(p):.3e}; "
                "the a priori chains need non-negative potentials"
            )
    mon = AprioriMonitor(s0, slack)
    reports = [mon.check(s, t) for s, t in zip(traj.states, traj.times)]
    times = [r.time for r in reports]
    exps = {
        key: fitted_exponent(times, [getattr(r, key) for r in reports])
        for key in ("l1_m", "l2_m", "l1_n", "l2_n", "h1_u", "h1_v")
    }
    exps["E0"] = mon.E0
    return AprioriResult(reports, exps)


def error_norms(s1, s2, n=None):
    """``||U|| + ||U_x|| + ||V|| + ||V_x||`` in L^2 for the difference of two states.

    With ``n`` given, each difference is mollified first.
    """
    g = s1.grid
    if s2.grid != g:
        raise ValueError("states live on different grids")
    total = 0.0
    for d in (s1.u - s2.u, s1.v - s2.v):
        if n is not None:
            d = mollify(g, d, n)
        total += lp_norm(g, d, 2) + lp_norm(g, deriv(g, d), 2)
    return total
