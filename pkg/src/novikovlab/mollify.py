"""The compactly supported bump, its rescaled mollifiers, and smoothing."""

import numpy as np

from .grid import integrate_x

# Minimum number of grid spacings across the support [-1/n, 1/n].
MIN_SAMPLES_ACROSS = 3.0


def bump(x):
    """``exp(1/(x^2 - 1))`` for ``|x| < 1``, zero elsewhere. Accepts arrays."""
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    xi = x[inside]
    out[inside] = np.exp(1.0 / (xi * xi - 1.0))
    return out if out.ndim else float(out)


def bump_prime(x):
    """Derivative of :func:`bump`."""
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    xi = x[inside]
    s = xi * xi - 1.0
    out[inside] = np.exp(1.0 / s) * (-2.0 * xi / (s * s))
    return out if out.ndim else float(out)


def check_resolution(grid, n):
    if int(n) != n or n < 1:
        raise ValueError(f"mollifier index must be a positive integer, got {n!r}")
    if 2.0 / n < MIN_SAMPLES_ACROSS * grid.dx:
        raise ValueError(
            f"mollifier n={n} has support 2/n={2.0 / n:.4g} below "
            f"{MIN_SAMPLES_ACROSS:g}*dx={MIN_SAMPLES_ACROSS * grid.dx:.4g}"
        )


def mollifier(n, grid, center=0.0):
    """Sampled ``n * bump(n x)`` centred at ``center``, rescaled to unit grid mass."""
    check_resolution(grid, n)
    rho = n * bump(n * grid.circle_distance(center))
    return rho / integrate_x(grid, rho)


def mollify(grid, f, n):
    """Periodic convolution ``rho_n * f`` through the FFT."""
    rho_hat = np.fft.rfft(mollifier(n, grid)) * grid.dx
    return np.fft.irfft(rho_hat * np.fft.rfft(f), grid.N)
