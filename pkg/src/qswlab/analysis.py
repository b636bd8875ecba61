"""Propagation measurement, convergence classification, structure
observance, and closed-form references for the interpolated global walk
on paths.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from . import graphs, numkernel
from ._kernels import path_profile_kernel
from .exceptions import DimensionError, NumericalError

GENERATOR_DIM_CAP = 2500  # largest n^2 we will diagonalize densely


def second_moment(p: np.ndarray, positions: np.ndarray) -> float:
    p = np.asarray(p, dtype=float)
    if abs(p.sum() - 1.0) > 1e-6:
        raise ValueError("probabilities must sum to 1")
    pos = np.asarray(positions, dtype=float)
    return float(np.sum(pos * pos * p))


@dataclass(frozen=True)
class PropagationTrace:
    timepoints: np.ndarray
    mu2: np.ndarray
    alpha_times: np.ndarray
    alphas: np.ndarray


def scaling_exponents(times, values, batch: int) -> PropagationTrace:
    """Sliding-window log-log slopes; window i is reported at the time
    midpoint (t_i + t_{i+batch-1}) / 2."""
    t = np.asarray(times, dtype=float)
    f = np.asarray(values, dtype=float)
    if t.size != f.size or t.size < batch or batch < 2:
        raise ValueError("need at least `batch` matching points, batch >= 2")
    if np.any(t <= 0) or np.any(f <= 0):
        raise ValueError("log-log slopes need positive data")
    lt, lf = np.log(t), np.log(f)
    m = t.size - batch + 1
    alphas = np.empty(m)
    mids = np.empty(m)
    for i in range(m):
        x = lt[i:i + batch]
        y = lf[i:i + batch]
        alphas[i] = np.polyfit(x, y, 1)[0]
        mids[i] = (t[i] + t[i + batch - 1]) / 2
    return PropagationTrace(timepoints=t, mu2=f, alpha_times=mids, alphas=alphas)


@dataclass(frozen=True)
class LimitFit:
    params: tuple            # (p1, p2, p3, p4)
    residual: float
    degenerate: bool         # p4 collapsed toward 0; p1 not extrapolable


def fit_limit_model(times, alphas) -> LimitFit:
    """Least-squares fit of f(t) = p1 - p2/(t - p3)^p4 with p4 > 0."""
    t = np.asarray(times, dtype=float)
    y = np.asarray(alphas, dtype=float)
    if t.size < 8:
        raise ValueError("need at least 8 points")
    tmin = t.min()

    def resid(p):
        p1, p2, p3, p4 = p
        return p1 - p2 / np.power(t - p3, p4) - y

    x0 = np.array([y[-1], max(abs(y[0] - y[-1]), 1e-3), 0.0, 1.0])
    lower = [-np.inf, -np.inf, -np.inf, 1e-8]
    upper = [np.inf, np.inf, tmin - 1e-9, np.inf]
    x0[2] = min(x0[2], tmin - 1.0)
    sol = optimize.least_squares(resid, x0, bounds=(lower, upper), max_nfev=20000)
    if not sol.success:
        raise NumericalError("limit-model fit did not converge")
    p = tuple(float(v) for v in sol.x)
    return LimitFit(params=p, residual=float(np.linalg.norm(sol.fun)),
                    degenerate=p[3] < 1e-6)


# ---------------------------------------------------------------------------
# Closed forms for the interpolated global walk on paths

def path_probability_closed_form(n: int, l: int, k: int, t: float, omega: float) -> float:
    """Probability of vertex k at time t, started at vertex l, on the
    n-vertex path; vertices numbered 1..n."""
    if not (1 <= l <= n and 1 <= k <= n):
        raise ValueError("vertex labels must lie in 1..n")
    theta = np.pi / (n + 1)
    i = np.arange(1, n + 1)
    lam = 2.0 * np.cos(i * theta)
    s = (2.0 / (n + 1)) * np.sin(k * i * theta) * np.sin(l * i * theta)
    return float(path_profile_kernel(float(t), float(omega), s, lam))


def path_probability_profile(n: int, l: int, t: float, omega: float) -> np.ndarray:
    """Vectorized profile over all n vertices via the eigenbasis contraction."""
    theta = np.pi / (n + 1)
    i = np.arange(1, n + 1)
    lam = 2.0 * np.cos(i * theta)
    sines = np.sin(np.outer(np.arange(1, n + 1), i) * theta)  # [k, i]
    d = lam[:, None] - lam[None, :]
    w = np.exp(-0.5 * t * omega * d * d) * np.cos(t * (1.0 - omega) * d)
    m = sines * sines[l - 1]
    p = (2.0 / (n + 1)) ** 2 * np.einsum("ki,ij,kj->k", m, w, m)
    return np.clip(p, 0.0, None)


def infinite_path_probability(k: int, t: float, omega: float) -> float:
    """Occupation probability of site k (start at 0) on the infinite path,
    by 2-D quadrature over the momentum torus."""
    if t < 0:
        raise ValueError("time must be nonnegative")

    def integrand(y, x):
        d = np.cos(x) - np.cos(y)
        return (
            np.cos(k * x) * np.cos(k * y)
            * np.exp(-2.0 * omega * t * d * d)
            * np.cos(2.0 * t * (1.0 - omega) * d)
        )

    val, err = integrate.dblquad(integrand, -np.pi, np.pi, -np.pi, np.pi,
                                 epsabs=1e-9, epsrel=1e-9)
    if err > 1e-6:
        raise NumericalError(f"quadrature error estimate {err} too large")
    return val / (4.0 * np.pi * np.pi)


def _log_comb(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def taylor_A(n: int, k: int) -> float:
    """Taylor coefficient of p_k(t) at omega = 1:
    A_{n,k} = (-1)^(n+k) 2^(-n) C(2n,n) C(2n,n+k), zero for n < |k|."""
    k = abs(k)
    if n < k:
        return 0.0
    sign = -1.0 if (n + k) % 2 else 1.0
    return sign * math.exp(_log_comb(2 * n, n) + _log_comb(2 * n, n + k) - n * math.log(2))


def taylor_B(n: int, k: int, omega: float) -> float:
    """Taylor coefficient for general omega in (0, 1]."""
    k = abs(k)
    if n < k:
        return 0.0
    acc = 0.0
    for l in range(min(n // 2, n - k) + 1):
        term = (
            math.comb(n, 2 * l)
            * math.comb(2 * n - 2 * l, n - l)
            * math.comb(2 * n - 2 * l, n - l + k)
        )
        acc += ((-1) ** l) * float(term) * (4.0 ** l) * omega ** (n - 2 * l) * (1.0 - omega) ** (2 * l)
    sign = -1.0 if (n + k) % 2 else 1.0
    return sign * acc / 2.0 ** n


def series_probability(k: int, t: float, omega: float, max_terms: int = 300) -> float:
    """p_k(t) on the infinite path summed from its Taylor coefficients."""
    total = 0.0
    tn = 1.0  # t^n / n!
    for n in range(max_terms):
        coeff = taylor_A(n, k) if omega == 1.0 else taylor_B(n, k, omega)
        term = coeff * tn
        total += term
        if n >= 2 * abs(k) + 10 and abs(term) < 1e-14 * max(abs(total), 1e-30):
            return total
        tn *= t / (n + 1)
    raise NumericalError("series did not settle within the term cap")


def moment_mu2(omega: float, t: float) -> float:
    return 2.0 * omega * t + 2.0 * (1.0 - omega) ** 2 * t * t


# ---------------------------------------------------------------------------
# Convergence classification

@dataclass(frozen=True)
class ConvergenceReport:
    classification: str           # Relaxing | ConvergentNonRelaxing | PossiblyPeriodic
    zero_multiplicity: int
    second_smallest_abs: float
    imaginary_count: int
    tol: float


def classify_convergence(gen, tol: float = 1e-10) -> ConvergenceReport:
    """Classify from the generator spectrum: eigenvalues below tol in
    modulus count as zero; eigenvalues with tiny real part but nonzero
    imaginary part witness possible periodicity."""
    m = gen.s
    if m.shape[0] > GENERATOR_DIM_CAP:
        raise DimensionError(
            f"generator size {m.shape[0]} exceeds dense cap {GENERATOR_DIM_CAP}"
        )
    lam = numkernel.eig_general(m)
    mods = np.abs(lam)
    zero = int(np.sum(mods < tol))
    imag = int(np.sum((np.abs(lam.real) < tol) & (np.abs(lam.imag) > tol)))
    nonzero = np.sort(mods[mods >= tol])
    second = float(nonzero[0]) if nonzero.size else 0.0
    if imag >= 1:
        cls = "PossiblyPeriodic"
    elif zero == 1:
        cls = "Relaxing"
    else:
        cls = "ConvergentNonRelaxing"
    return ConvergenceReport(classification=cls, zero_multiplicity=zero,
                             second_smallest_abs=second, imaginary_count=imag, tol=tol)


# ---------------------------------------------------------------------------
# Structure observance

def structure_measures(g: graphs.DiGraph, probs: np.ndarray):
    """For each probability row: mass on the unique sink component, and the
    squared-distance-to-sink weighted spread."""
    probs = np.atleast_2d(np.asarray(probs, dtype=float))
    if probs.shape[1] != g.n:
        raise DimensionError("probability rows must have one entry per vertex")
    cond = graphs.condensation(g)
    dist = graphs.distances_to_sink_set(g, cond).astype(float)
    sink = np.zeros(g.n)
    for v in cond.partition[cond.sinks[0]]:
        sink[v] = 1.0
    p_s = probs @ sink
    mu_s = probs @ (dist * dist)
    return p_s, mu_s


def convergence_profile(probs: np.ndarray, times) -> float:
    """Smallest timepoint after which the sup-distance to the final
    distribution is nonincreasing."""
    probs = np.asarray(probs, dtype=float)
    times = np.asarray(times, dtype=float)
    if probs.shape[0] != times.size or times.size < 3:
        raise ValueError("need one probability row per timepoint, at least 3")
    dev = np.abs(probs - probs[-1]).max(axis=1)
    start = 0
    for i in range(times.size - 2, -1, -1):
        if dev[i] < dev[i + 1] - 1e-12:
            start = i + 1
            break
    return float(times[start])
