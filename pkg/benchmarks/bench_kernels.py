"""Compare the numba and numpy kernel backends.

Run with `python benchmarks/bench_kernels.py`. Results depend on the
machine; the point is the relative cost and that both backends agree
bit-for-bit on identical inputs.
"""
import time

import numpy as np

from qswlab import _kernels, graphs, search


def timeit(fn, *args, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_hitting():
    g = graphs.gen_er(200, 0.05, seed=7)
    g = graphs.giant_component(g)
    indptr, indices = search._csr_arrays(g)
    rng = np.random.default_rng(0)
    walks, max_steps = 20000, 5000
    starts = rng.integers(0, g.n, size=walks).astype(np.int64)
    raw = rng.random((walks, max_steps))
    args = (indptr, indices, starts, np.int64(0), np.int64(max_steps), raw)

    if hasattr(_kernels, "hitting_steps_numba"):
        _kernels.hitting_steps_numba(*args)  # compile before timing
        t_nb, out_nb = timeit(_kernels.hitting_steps_numba, *args)
    else:
        t_nb, out_nb = None, None
    t_np, out_np = timeit(_kernels.hitting_steps_numpy, *args)

    print(f"hitting_steps  ({walks} walks, cap {max_steps})")
    print(f"  numpy lockstep: {t_np * 1e3:9.1f} ms")
    if t_nb is not None:
        match = np.array_equal(out_nb, out_np)
        print(f"  numba loop:     {t_nb * 1e3:9.1f} ms   "
              f"speedup {t_np / t_nb:5.1f}x   identical={match}")


def bench_profile():
    n = 801
    theta = np.pi / (n + 1)
    i = np.arange(1, n + 1)
    lam = 2.0 * np.cos(i * theta)
    s = (2.0 / (n + 1)) * np.sin(400 * i * theta) * np.sin(300 * i * theta)
    args = (25.0, 0.5, s, lam)

    if hasattr(_kernels, "path_profile_numba"):
        _kernels.path_profile_numba(*args)
        t_nb, out_nb = timeit(_kernels.path_profile_numba, *args)
    else:
        t_nb, out_nb = None, None
    t_np, out_np = timeit(_kernels.path_profile_numpy, *args)

    print(f"path_profile   (n={n})")
    print(f"  numpy:          {t_np * 1e3:9.1f} ms")
    if t_nb is not None:
        print(f"  numba loop:     {t_nb * 1e3:9.1f} ms   "
              f"speedup {t_np / t_nb:5.1f}x   |diff|={abs(out_nb - out_np):.2e}")


if __name__ == "__main__":
    print(f"active backend: {_kernels.BACKEND}")
    bench_hitting()
    bench_profile()
