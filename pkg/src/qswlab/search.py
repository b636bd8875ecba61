"""Continuous-time quantum spatial search and its classical baseline.

A marked vertex w is searched by evolving under gamma*H_G + |w><w| where
H_G is a normalized graph matrix with top eigenvalue 1. Spectral overlap
sums S_k drive the choice of gamma, the predicted measurement time, and
the applicability condition. The classical comparison is the mean first
passage time of the discrete uniform random walk.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import lambertw

from . import graphs, numkernel
from ._kernels import hitting_steps_kernel
from .exceptions import DegenerateTopError, OracleNeverSucceeds

GRAPH_MATRIX_KINDS = ("adjacency", "laplacian", "normalized_laplacian")


def _base_matrix(g: graphs.Graph, kind: str) -> np.ndarray:
    if kind == "adjacency":
        return graphs.adjacency(g)
    if kind == "laplacian":
        graphs.require_connected(g)
        return graphs.laplacian(g)
    if kind == "normalized_laplacian":
        graphs.require_connected(g)
        return graphs.normalized_laplacian(g)
    raise ValueError(f"unknown graph matrix kind {kind!r}")


def graph_hamiltonian(g: graphs.Graph, kind: str) -> np.ndarray:
    """Normalized search matrix with top eigenvalue exactly 1."""
    m = _base_matrix(g, kind)
    if kind == "adjacency":
        top = np.linalg.eigvalsh(m)[-1]
        return m / top
    if kind == "laplacian":
        top = np.linalg.eigvalsh(m)[-1]
        return np.eye(g.n) - m / top
    return np.eye(g.n) - m


def shift_rescale(h: np.ndarray) -> np.ndarray:
    """Affine map to top eigenvalue 1 with |lambda_2| = |lambda_n|.

    Balancing the second and bottom eigenvalues maximizes the worst-case
    success bound over shifts; eigenvectors are untouched.
    """
    w = np.linalg.eigvalsh(np.asarray(h, dtype=complex))
    lam1, lam2, lamn = w[-1], w[-2], w[0]
    if lam1 - lam2 <= 1e-12:
        raise DegenerateTopError("top eigenvalue is not simple")
    a = -(lam2 + lamn) / 2.0
    return (h + a * np.eye(h.shape[0])) / (lam1 + a)


def optimal_shift_success_bound(lam2: float, lamn: float) -> float:
    return (1.0 - lam2) / (1.0 - lamn)


@dataclass(frozen=True)
class SearchStats:
    eps: float
    s1: float
    s2: float
    s3: float
    gap: float
    condition_holds: bool
    c_const: float
    predicted_t: float
    gamma: float


def search_stats(h_g: np.ndarray, w: int, c_const: float = 0.1) -> SearchStats:
    es = numkernel.eig_hermitian(h_g)
    lam, vec = es.values, es.vectors
    overlaps = np.abs(vec[w, :]) ** 2
    eps = float(overlaps[0])
    denom = 1.0 - lam[1:]
    s1 = float(np.sum(overlaps[1:] / denom))
    s2 = float(np.sum(overlaps[1:] / denom**2))
    s3 = float(np.sum(overlaps[1:] / denom**3))
    gap = float(lam[0] - lam[1])
    cond = math.sqrt(eps) < c_const * min(s1 * s2 / s3, gap * math.sqrt(s2))
    predicted_t = (1.0 / math.sqrt(eps)) * math.sqrt(s2) / s1 if eps > 0 else math.inf
    return SearchStats(eps=eps, s1=s1, s2=s2, s3=s3, gap=gap,
                       condition_holds=cond, c_const=c_const,
                       predicted_t=predicted_t, gamma=s1)


def caption_gamma(h_g: np.ndarray, w: int) -> float:
    """Transition rate S1 / (1 - eps), the spectral-average variant."""
    st = search_stats(h_g, w)
    return st.s1 / (1.0 - st.eps)


@dataclass(frozen=True)
class SearchRun:
    times: np.ndarray
    probs: np.ndarray
    argmax_t: float
    p_max: float
    gamma: float


def run_search(h_g: np.ndarray, w: int, gamma, initial, times) -> SearchRun:
    """Success probability |<w| exp(-i(gamma H_G + |w><w|) t) |init>|^2.

    gamma may be "S1", "caption", or a number. initial may be
    "principal" (top eigenvector of H_G), "uniform", or a state vector.
    """
    n = h_g.shape[0]
    if isinstance(gamma, str):
        if gamma == "S1":
            gamma = search_stats(h_g, w).gamma
        elif gamma == "caption":
            gamma = caption_gamma(h_g, w)
        else:
            raise ValueError(f"unknown gamma rule {gamma!r}")
    if isinstance(initial, str):
        if initial == "principal":
            vec = numkernel.eig_hermitian(h_g).vectors[:, 0]
            if vec.real.sum() < 0:
                vec = -vec
            initial = vec
        elif initial == "uniform":
            initial = np.ones(n) / math.sqrt(n)
        else:
            raise ValueError(f"unknown initial state {initial!r}")
    psi0 = np.asarray(initial, dtype=complex)
    h_search = float(gamma) * np.asarray(h_g, dtype=complex)
    h_search[w, w] += 1.0
    times = np.asarray(times, dtype=float)
    es = numkernel.eig_hermitian(h_search)
    coeff = es.vectors.conj().T @ psi0
    row_w = es.vectors[w, :]
    probs = np.empty(times.size)
    for i, t in enumerate(times):
        amp = row_w @ (np.exp(-1j * t * es.values) * coeff)
        probs[i] = min(1.0, abs(amp) ** 2)
    k = int(np.argmax(probs))
    return SearchRun(times=times, probs=probs, argmax_t=float(times[k]),
                     p_max=float(probs[k]), gamma=float(gamma))


# ---------------------------------------------------------------------------
# Classical baseline

def classical_mfpt(g: graphs.Graph, w: int) -> float:
    """Mean first passage time to w of the discrete uniform walk started
    from the stationary distribution: (2|E|/deg(w)) * S1 over I minus the
    normalized Laplacian."""
    graphs.require_connected(g)
    m = np.eye(g.n) - graphs.normalized_laplacian(g)
    es = numkernel.eig_hermitian(m)
    overlaps = np.abs(es.vectors[w, 1:]) ** 2
    s1 = float(np.sum(overlaps / (1.0 - es.values[1:])))
    e_count = len(g.edges)
    return 2.0 * e_count / g.degree(w) * s1


def classical_mfpt_lower_bound(g: graphs.Graph, w: int) -> float:
    return len(g.edges) / g.degree(w) - 0.5


def _csr_arrays(g: graphs.Graph):
    adj = [[] for _ in range(g.n)]
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    indptr = np.zeros(g.n + 1, dtype=np.int64)
    for v in range(g.n):
        adj[v].sort()
        indptr[v + 1] = indptr[v] + len(adj[v])
    indices = np.fromiter((w for nbrs in adj for w in nbrs), dtype=np.int64,
                          count=indptr[-1])
    return indptr, indices


def classical_mfpt_mc(g: graphs.Graph, w: int, walks: int, seed: int,
                      max_steps: int | None = None) -> float:
    """Monte Carlo estimate: walks start from the stationary distribution
    (degree / 2|E|); a start on w counts as 0 steps."""
    graphs.require_connected(g)
    indptr, indices = _csr_arrays(g)
    deg = g.degrees().astype(float)
    rng = np.random.default_rng(seed)
    starts = rng.choice(g.n, size=walks, p=deg / deg.sum()).astype(np.int64)
    if max_steps is None:
        max_steps = max(100, int(100 * len(g.edges) / g.degree(w)))
    chunk = max(1, int(2e7) // max_steps)
    total = 0.0
    for lo in range(0, walks, chunk):
        batch = starts[lo:lo + chunk]
        raw = rng.random((batch.size, max_steps))
        steps = hitting_steps_kernel(indptr, indices, batch, np.int64(w),
                                     np.int64(max_steps), raw)
        total += steps.sum()
    return total / walks


# ---------------------------------------------------------------------------
# Measurement-time schedule and Lambert bound

def geometric_schedule(beta0: float, beta1: float, kprime: float, n: int,
                       oracle, c: float = 1.0):
    """Try measurement times t_k = c * n^(beta0 + k*beta1/K), K = K' ln n,
    until the oracle reports success. Consecutive times have the fixed
    ratio exp(beta1/K')."""
    if beta1 <= 0 or kprime <= 0:
        raise ValueError("beta1 and kprime must be positive")
    big_k = kprime * math.log(n)
    total = 0.0
    k = 0
    while k <= big_k:
        t_k = c * n ** (beta0 + k * beta1 / big_k)
        total += t_k
        if oracle(t_k):
            return total, k
        k += 1
    raise OracleNeverSucceeds(f"no success within {k} schedule steps")


def _lambert_branch(x: float, branch: int) -> float:
    w = float(np.real(lambertw(x, branch)))
    # one Halley polish keeps the defining residual at the 1e-12 scale
    for _ in range(3):
        ew = math.exp(w)
        f = w * ew - x
        if abs(f) <= 1e-13 * max(1.0, abs(x)):
            break
        denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0)
        w -= f / denom
    return w


def lambert_bound(p0: float) -> float:
    """Success-probability bound W0(x)/W-1(x) with x = (1-p0)/(e*p0)."""
    if p0 <= 1.0:
        raise ValueError("p0 must exceed 1")
    x = (1.0 - p0) / (math.e * p0)
    return _lambert_branch(x, 0) / _lambert_branch(x, -1)


@dataclass(frozen=True)
class SpectralReport:
    lam1: float
    lam2: float
    lamn: float
    gap: float
    overlap: float
    maxdev: float


def spectral_report(g: graphs.Graph, kind: str = "adjacency") -> SpectralReport:
    """Top-of-spectrum statistics of the raw graph matrix, plus agreement
    of its principal eigenvector with the uniform superposition."""
    m = _base_matrix(g, kind)
    es = numkernel.eig_hermitian(m)
    vec = es.vectors[:, 0]
    if vec.real.sum() < 0:
        vec = -vec
    s = np.ones(g.n) / math.sqrt(g.n)
    return SpectralReport(
        lam1=float(es.values[0]),
        lam2=float(es.values[1]),
        lamn=float(es.values[-1]),
        gap=float(es.values[0] - es.values[1]),
        overlap=float(abs(vec @ s)),
        maxdev=float(np.abs(vec.real - s).max()),
    )
