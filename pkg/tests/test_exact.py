import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from novikovlab import helm_apply, integrate_x, make_grid, mollified_peakon, mollifier, peakon, periodic_peakon, potentials
from novikovlab.exact import circular_displacement, crest_position, periodic_peakon_profile


def test_peakon_values():
    g = make_grid(40.0, 1024)
    s = peakon(2.0, 0.0, g)
    assert s.u[0] == pytest.approx(math.sqrt(2.0))
    s = peakon(1.0, 0.0, make_grid(32.0, 1024))
    assert s.u[32] == pytest.approx(math.exp(-1), rel=1e-15)
    assert np.array_equal(s.u, s.v)
    s = peakon(1.0, 0.5, g, x0=10.0)
    assert crest_position(g, s.u) == pytest.approx(10.5, abs=g.dx)
    with pytest.raises(ValueError):
        peakon(0.0, 0.0, g)


def test_periodic_peakon_values():
    c = 2.0
    assert periodic_peakon_profile(c, 0.3, 0.3 * c) == pytest.approx(math.sqrt(c), rel=1e-14)
    trough = periodic_peakon_profile(c, 0.0, math.pi)
    assert trough == pytest.approx(math.sqrt(c) / math.cosh(math.pi), rel=1e-14)
    assert 1 / math.cosh(math.pi) == pytest.approx(0.0863, abs=1e-4)
    with pytest.raises(ValueError):
        periodic_peakon(1.0, 0.0, make_grid(6.0, 64))


@settings(max_examples=50, deadline=None)
@given(st.floats(0.1, 4), st.floats(-5, 5), st.floats(-20, 20))
def test_periodic_peakon_has_period_two_pi(c, t, x):
    a = periodic_peakon_profile(c, t, x)
    b = periodic_peakon_profile(c, t, x + 2 * np.pi)
    assert a == pytest.approx(b, rel=1e-9)


def test_periodic_traveling_wave_is_an_exact_shift():
    g = make_grid(2 * np.pi, 256)
    c = 1.0
    steps = 40
    t = steps * g.dx / c
    a = periodic_peakon(c, 0.0, g).u
    b = periodic_peakon(c, t, g).u
    assert np.max(np.abs(np.roll(a, steps) - b)) < 1e-12


def test_peak_speed_from_argmax():
    g = make_grid(2 * np.pi, 1024)
    c, t1, t2 = 1.5, 0.2, 1.7
    x1 = crest_position(g, periodic_peakon(c, t1, g).u)
    x2 = crest_position(g, periodic_peakon(c, t2, g).u)
    speed = circular_displacement(g, x1, x2) / (t2 - t1)
    assert abs(speed - c) <= g.dx / (t2 - t1)


def test_circular_displacement_wraps():
    g = make_grid(10.0, 64)
    assert circular_displacement(g, 9.5, 0.5) == pytest.approx(1.0)
    assert circular_displacement(g, 0.5, 9.5) == pytest.approx(-1.0)


@pytest.mark.parametrize("c", [0.5, 1.0, 2.0])
def test_mollified_peakon(c):
    g = make_grid(40.0, 2048)
    s = mollified_peakon(c, 32, g, x0=20.0)
    p = potentials(s)
    assert p.m.min() >= -1e-10
    assert np.array_equal(s.u, s.v)
    assert integrate_x(g, p.m) == pytest.approx(integrate_x(g, s.u), rel=1e-13)
    assert integrate_x(g, s.u) == pytest.approx(2 * math.sqrt(c), abs=1e-4)
    assert s.u.max() < math.sqrt(c)
    # outside the support rho_n * peakon is the peakon times int rho_n(y) exp(y) dy
    rho = mollifier(32, g, center=20.0)
    factor = integrate_x(g, rho * np.exp(g.x - 20.0))
    raw = peakon(c, 0.0, g, x0=20.0).u
    far = g.circle_distance(20.0) > 0.1
    assert np.max(np.abs(s.u - factor * raw)[far]) < 1e-5 * math.sqrt(c)
    assert abs(factor - 1) > 5e-5


def test_mollified_peakon_potential_is_compact():
    g = make_grid(40.0, 2048)
    m = helm_apply(g, mollified_peakon(1.0, 16, g, x0=20.0).u)
    outside = g.circle_distance(20.0) > 1 / 16 + g.dx
    assert np.max(np.abs(m[outside])) < 1e-9
