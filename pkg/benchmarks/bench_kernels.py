"""Compare the numba kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--points 2048] [--repeat 200]

Part one times each pointwise kernel in-process. Part two times a short
reference integration twice in subprocesses, once with the compiled kernels
and once with ``NOVIKOVLAB_DISABLE_JIT=1``, and checks that both produce the
same final state bit for bit.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from novikovlab import _accel

RUN = """
import hashlib, time
import numpy as np
from novikovlab import SolverConfig, integrate, make_grid, mollified_peakon, backend
g = make_grid(40.0, {n})
s0 = mollified_peakon(1.0, 8, g, x0=20.0)
cfg = SolverConfig(T={t}, L=40.0, N={n}, dt=1e-3, record_every=10**9)
integrate(s0, SolverConfig(T=1e-3, L=40.0, N={n}, dt=1e-3), monitor=False)
t0 = time.perf_counter()
s = integrate(s0, cfg, monitor=False).final
dt = time.perf_counter() - t0
h = hashlib.sha256(np.concatenate([s.u, s.v]).tobytes()).hexdigest()[:16]
print(backend(), dt, h)
"""


def kernel_table(n, repeat):
    rng = np.random.default_rng(0)
    a, b, c, d, e = (rng.standard_normal(n) for _ in range(5))
    calls = {
        "nonlocal_sources": (a, b, c, d, e),
        "local_rate": (a, b, c, d, e),
        "axpy": (a, b, 0.1),
        "rk4_combine": (a, b, c, d, e, 0.1),
        "max_abs_product": (a, b),
    }
    print(f"pointwise kernels, N={n}, best of 5 x {repeat} calls (microseconds per call)")
    print(f"{'kernel':<18}{'numpy':>10}{'numba':>10}{'speedup':>10}")
    for name, args in calls.items():
        row = []
        for table in (_accel.NUMPY_KERNELS, _accel.NUMBA_KERNELS):
            fn = table[name]
            fn(*args)
            best = min(timeit.repeat(lambda: fn(*args), number=repeat, repeat=5))
            row.append(1e6 * best / repeat)
        print(f"{name:<18}{row[0]:>10.2f}{row[1]:>10.2f}{row[0] / row[1]:>10.2f}")

    m = min(n, 512)
    kern, f = rng.standard_normal(m), rng.standard_normal(m)
    row = []
    for table in (_accel.NUMPY_KERNELS, _accel.NUMBA_KERNELS):
        fn = table["circular_convolve"]
        fn(kern, f, 0.1)
        row.append(1e3 * min(timeit.repeat(lambda: fn(kern, f, 0.1), number=3, repeat=3)) / 3)
    print(f"circular_convolve at N={m} (ms): numpy {row[0]:.2f}, numba {row[1]:.2f}")


def full_run(n, t_final):
    results = {}
    for flag in ("0", "1"):
        env = dict(os.environ, NOVIKOVLAB_DISABLE_JIT=flag)
        out = subprocess.run([sys.executable, "-c", RUN.format(n=n, t=t_final)], env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        results[out[0]] = (float(out[1]), out[2])
    print(f"\nintegration N={n}, T={t_final}, dt=1e-3 (seconds, first step excluded)")
    for name, (secs, digest) in results.items():
        print(f"{name:<8}{secs:>8.2f}  final-state hash {digest}")
    digests = {d for _, d in results.values()}
    print("final states identical" if len(digests) == 1 else "FINAL STATES DIFFER")
    return len(digests) == 1


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=2048)
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--t-final", type=float, default=0.5)
    args = ap.parse_args()
    if not _accel.NUMBA_AVAILABLE:
        sys.exit("numba is not installed")
    kernel_table(args.points, args.repeat)
    sys.exit(0 if full_run(args.points, args.t_final) else 1)


if __name__ == "__main__":
    main()
