"""Inverse Helmholtz operator ``(1 - d_xx)^{-1}`` on the periodic lattice.

On the line the operator is convolution with ``g(x) = exp(-|x|)/2``. On a
circle of length ``L`` the Green's function is
``cosh(d - L/2) / (2 sinh(L/2))`` with ``d`` the circle distance to zero;
numerically it is applied as the Fourier multiplier ``1/(1 + k^2)``.
"""

from functools import lru_cache

import numpy as np

from . import _accel


@lru_cache(maxsize=32)
def _symbols(grid):
    k2 = grid.k**2
    inv = 1.0 / (1.0 + k2)
    dinv = grid.ik * inv
    for a in (k2, inv, dinv):
        a.setflags(write=False)
    return k2, inv, dinv


def green_kernel(grid):
    """Samples of the periodic Green's function; positive, unit integral."""
    d = grid.circle_distance(0.0)
    L = grid.L
    # cosh(d - L/2) / (2 sinh(L/2)) without overflow for large L
    return (np.exp(-d) + np.exp(d - L)) / (2.0 * (-np.expm1(-L)))


def green_kernel_dx(grid):
    """Samples of the kernel's derivative (zero at the corner and antipode)."""
    xm = np.mod(grid.x, grid.L)
    d = grid.circle_distance(0.0)
    L = grid.L
    sgn = np.where(xm < L / 2, 1.0, -1.0)
    sgn[(d == 0.0) | (d == L / 2)] = 0.0
    # d/dx cosh(d - L/2) = sinh(d - L/2) * sign
    return sgn * (np.exp(d - L) - np.exp(-d)) / (2.0 * (-np.expm1(-L)))


def helm_inv(grid, f):
    """Return ``w`` with ``w - w_xx = f``."""
    _, inv, _ = _symbols(grid)
    return np.fft.irfft(inv * np.fft.rfft(f), grid.N)


def helm_apply(grid, u):
    """``u - u_xx`` spectrally; the Nyquist mode is kept so this inverts helm_inv."""
    k2, _, _ = _symbols(grid)
    return np.fft.irfft((1.0 + k2) * np.fft.rfft(u), grid.N)


def conv_gx(grid, f):
    """Convolution with ``g_x``, i.e. ``d/dx (1 - d_xx)^{-1} f``."""
    _, _, dinv = _symbols(grid)
    return np.fft.irfft(dinv * np.fft.rfft(f), grid.N)


def dense_convolve(grid, kernel, f):
    """Direct O(N^2) periodic convolution; kept as an oracle for the FFT path."""
    return _accel.circular_convolve(kernel, f, grid.dx)
