"""Timing comparison between the compiled and the pure-numpy kernels for the
dynamical-system loss and gradient.

Run: python benchmarks/bench_lds_kernel.py
"""

import time

import numpy as np

from quasaropt._kernels import USING_COMPILED, _lds_py

try:
    from quasaropt._kernels import _lds_cy
except ImportError:
    _lds_cy = None


def bench(impl, A, B, C, D, x, y, t1, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        impl.loss_grad(A, B, C, D, x, y, t1)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(0)
    print(f"compiled extension available: {USING_COMPILED}")
    for N, d, T in [(50, 3, 64), (200, 5, 128), (1000, 8, 256)]:
        A = 0.5 * rng.standard_normal((d, d)) / np.sqrt(d)
        B = rng.standard_normal(d)
        C = rng.standard_normal(d)
        D = float(rng.standard_normal())
        x = np.ascontiguousarray(rng.standard_normal((N, T)))
        y = np.ascontiguousarray(rng.standard_normal((N, T)))
        t1 = T // 4
        t_py = bench(_lds_py, A, B, C, D, x, y, t1)
        line = f"N={N:5d} d={d} T={T:4d}  numpy {t_py * 1e3:8.2f} ms"
        if _lds_cy is not None:
            t_cy = bench(_lds_cy, A, B, C, D, x, y, t1)
            line += f"  compiled {t_cy * 1e3:8.2f} ms  speedup {t_py / t_cy:5.2f}x"
        print(line)


if __name__ == "__main__":
    main()
