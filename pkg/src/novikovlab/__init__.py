"""Pseudospectral laboratory for the two-component Novikov system."""

from ._accel import backend
from .diagnostics import (
    AprioriMonitor, Report, SignConditionError, apriori_report, energy,
    error_norms, negativity,
)
from .dynamics import Potentials, State, potentials, rhs_m, rhs_uv
from .exact import mollified_peakon, peakon, periodic_peakon
from .grid import BlowUpError, Grid, deriv, h1_norm, integrate_x, lp_norm, make_grid
from .helmholtz import conv_gx, green_kernel, helm_apply, helm_inv
from .lab import cont_dependence, mollify_study, unit_perturbation
from .mollify import bump, mollifier, mollify
from .stepper import CFLStarvationError, SolverConfig, Trajectory, integrate, step_rk4
from .weakform import make_phi, residual_sweep, weak_residual

__version__ = "0.1.0"
