"""Hot numerical loops with two interchangeable backends.

The default backend JIT-compiles per-walk loops with numba. Setting the
environment variable QSWLAB_DISABLE_NUMBA (to any non-empty value) selects
pure-numpy implementations instead; both produce identical results for a
given seed because they consume the same pre-drawn uniforms. The active
backend name is exposed as BACKEND; both implementations stay importable
so they can be benchmarked against each other.
"""
from __future__ import annotations

import os

import numpy as np

_USE_NUMBA = not os.environ.get("QSWLAB_DISABLE_NUMBA")
if _USE_NUMBA:
    try:
        import numba
    except ImportError:
        _USE_NUMBA = False

BACKEND = "numba" if _USE_NUMBA else "numpy"


def _hitting_steps_loop(indptr, indices, starts, target, max_steps, raw):
    """Steps of a simple random walk from each start until hitting target.

    raw supplies one uniform(0,1) row per walk; a walk that exhausts its
    row without arriving is reported as max_steps. Walks starting on the
    target take 0 steps.
    """
    n_walks = starts.shape[0]
    out = np.empty(n_walks, dtype=np.int64)
    for w in range(n_walks):
        v = starts[w]
        steps = 0
        while v != target and steps < max_steps:
            lo = indptr[v]
            deg = indptr[v + 1] - lo
            v = indices[lo + int(raw[w, steps] * deg)]
            steps += 1
        out[w] = steps
    return out


def hitting_steps_numpy(indptr, indices, starts, target, max_steps, raw):
    """Lockstep-vectorized variant: every unfinished walk advances together."""
    n_walks = starts.shape[0]
    pos = starts.copy()
    steps = np.zeros(n_walks, dtype=np.int64)
    active = pos != target
    k = 0
    while active.any() and k < max_steps:
        idx = np.nonzero(active)[0]
        v = pos[idx]
        lo = indptr[v]
        deg = indptr[v + 1] - lo
        pos[idx] = indices[lo + (raw[idx, k] * deg).astype(np.int64)]
        steps[idx] += 1
        active[idx] = pos[idx] != target
        k += 1
    return steps


def _path_profile_loop(t, omega, s_rows, lam):
    """Contract eigenbasis weights s_i against the eigenvalue-difference
    kernel of the interpolated walk on a path."""
    n = lam.shape[0]
    acc = 0.0
    for i in range(n):
        for j in range(n):
            d = lam[i] - lam[j]
            acc += s_rows[i] * s_rows[j] * np.exp(-0.5 * t * omega * d * d) * np.cos(
                t * (1.0 - omega) * d
            )
    return acc


def path_profile_numpy(t, omega, s_rows, lam):
    d = lam[:, None] - lam[None, :]
    w = np.exp(-0.5 * t * omega * d * d) * np.cos(t * (1.0 - omega) * d)
    return float(s_rows @ w @ s_rows)


if _USE_NUMBA:
    hitting_steps_numba = numba.njit(cache=True)(_hitting_steps_loop)
    path_profile_numba = numba.njit(cache=True)(_path_profile_loop)
    hitting_steps_kernel = hitting_steps_numba
    path_profile_kernel = path_profile_numba
else:
    hitting_steps_kernel = hitting_steps_numpy
    path_profile_kernel = path_profile_numpy
