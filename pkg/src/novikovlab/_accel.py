"""Fused pointwise kernels with a numba path and a pure-numpy fallback.

The Fourier transforms stay in numpy; what is compiled here is the pointwise
work around them (cubic products, Runge-Kutta stage updates) and the dense
O(N^2) circular convolution used as an independent test oracle.

Set ``NOVIKOVLAB_DISABLE_JIT=1`` before import to force the numpy path.
Both paths evaluate the same floating-point expressions in the same order.
"""

import os

import numpy as np

_DISABLE = os.environ.get("NOVIKOVLAB_DISABLE_JIT", "").strip().lower() in {
    "1", "true", "yes", "on",
}

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_AVAILABLE = numba is not None
USE_NUMBA = NUMBA_AVAILABLE and not _DISABLE


# ---------------------------------------------------------------- numpy path

def _nonlocal_sources_np(a, b, ax, bx, pa):
    flux = a * b * pa
    src = (2.0 * ax * b - a * bx) * pa
    return flux, src


def _local_rate_np(a, b, ax, pa, pax):
    return -(3.0 * ax * b * pa + a * b * pax)


def _axpy_np(y, k, h):
    return y + h * k


def _rk4_combine_np(y, k1, k2, k3, k4, h):
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _max_abs_product_np(a, b):
    return float(np.max(np.abs(a * b)))


def _circular_convolve_np(kernel, f, dx):
    n = f.shape[0]
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    return dx * (kernel[idx] @ f)


NUMPY_KERNELS = {
    "nonlocal_sources": _nonlocal_sources_np,
    "local_rate": _local_rate_np,
    "axpy": _axpy_np,
    "rk4_combine": _rk4_combine_np,
    "max_abs_product": _max_abs_product_np,
    "circular_convolve": _circular_convolve_np,
}


# ---------------------------------------------------------------- numba path

def _build_numba_kernels():
    njit = numba.njit(cache=False, fastmath=False)

    @njit
    def nonlocal_sources(a, b, ax, bx, pa):
        n = a.shape[0]
        flux = np.empty(n)
        src = np.empty(n)
        for i in range(n):
            flux[i] = a[i] * b[i] * pa[i]
            src[i] = (2.0 * ax[i] * b[i] - a[i] * bx[i]) * pa[i]
        return flux, src

    @njit
    def local_rate(a, b, ax, pa, pax):
        n = a.shape[0]
        out = np.empty(n)
        for i in range(n):
            out[i] = -(3.0 * ax[i] * b[i] * pa[i] + a[i] * b[i] * pax[i])
        return out

    @njit
    def axpy(y, k, h):
        out = np.empty_like(y)
        for i in range(y.shape[0]):
            out[i] = y[i] + h * k[i]
        return out

    @njit
    def rk4_combine(y, k1, k2, k3, k4, h):
        w = h / 6.0
        out = np.empty_like(y)
        for i in range(y.shape[0]):
            out[i] = y[i] + w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        return out

    @njit
    def max_abs_product(a, b):
        best = 0.0
        for i in range(a.shape[0]):
            p = abs(a[i] * b[i])
            if p > best or p != p:
                best = p
        return best

    @njit
    def circular_convolve(kernel, f, dx):
        n = f.shape[0]
        out = np.zeros(n)
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc += kernel[(i - j) % n] * f[j]
            out[i] = dx * acc
        return out

    return {
        "nonlocal_sources": nonlocal_sources,
        "local_rate": local_rate,
        "axpy": axpy,
        "rk4_combine": rk4_combine,
        "max_abs_product": max_abs_product,
        "circular_convolve": circular_convolve,
    }


NUMBA_KERNELS = _build_numba_kernels() if NUMBA_AVAILABLE else {}

_ACTIVE = NUMBA_KERNELS if USE_NUMBA else NUMPY_KERNELS


def _as_float_array(x):
    return np.ascontiguousarray(x, dtype=np.float64)


def nonlocal_sources(a, b, ax, bx, pa):
    """Return ``(a*b*pa, (2*ax*b - a*bx)*pa)`` in one pass."""
    args = [_as_float_array(z) for z in (a, b, ax, bx, pa)]
    return _ACTIVE["nonlocal_sources"](*args)


def local_rate(a, b, ax, pa, pax):
    """Return ``-(3*ax*b*pa + a*b*pax)``, the potential-form rate."""
    args = [_as_float_array(z) for z in (a, b, ax, pa, pax)]
    return _ACTIVE["local_rate"](*args)


def axpy(y, k, h):
    return _ACTIVE["axpy"](_as_float_array(y), _as_float_array(k), float(h))


def rk4_combine(y, k1, k2, k3, k4, h):
    args = [_as_float_array(z) for z in (y, k1, k2, k3, k4)]
    return _ACTIVE["rk4_combine"](*args, float(h))


def max_abs_product(a, b):
    return float(_ACTIVE["max_abs_product"](_as_float_array(a), _as_float_array(b)))


def circular_convolve(kernel, f, dx):
    """Dense periodic convolution ``dx * sum_j kernel[i-j] f[j]``, O(N^2)."""
    return _ACTIVE["circular_convolve"](
        _as_float_array(kernel), _as_float_array(f), float(dx)
    )


def backend():
    return "numba" if USE_NUMBA else "numpy"
