"""Dense complex linear algebra: eigendecompositions, matrix-exponential
action, and Kronecker/vectorization primitives.

Vectorization is row-major: vec(B) = sum_xy b_xy |xy>, so
vec(A B C) = (A kron C^T) vec(B).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .exceptions import DimensionError, NumericalError

TOL_HERM = 1e-12


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(np.asarray(a), np.asarray(b))


def vec(b: np.ndarray) -> np.ndarray:
    """Row-major vectorization: vec(|x><y|) = |x> kron |y>."""
    return np.asarray(b).reshape(-1)


def unvec(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v).reshape(-1)
    n = math.isqrt(v.size)
    if n * n != v.size:
        raise DimensionError(f"cannot unvec a vector of length {v.size}")
    return v.reshape(n, n)


def check_hermitian(h: np.ndarray, tol: float = TOL_HERM) -> np.ndarray:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {h.shape}")
    scale = max(1.0, float(np.abs(h).max(initial=0.0)))
    dev = float(np.abs(h - h.conj().T).max(initial=0.0))
    if dev > tol * scale:
        raise NumericalError(f"matrix is not Hermitian (deviation {dev:.3e})")
    return h


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues sorted descending, orthonormal eigenvectors as columns."""

    values: np.ndarray
    vectors: np.ndarray


def eig_hermitian(h: np.ndarray) -> EigenSystem:
    h = check_hermitian(h)
    w, v = np.linalg.eigh(h)
    return EigenSystem(values=w[::-1].copy(), vectors=v[:, ::-1].copy())


def eig_general(m) -> np.ndarray:
    """Complex eigenvalues of a general square matrix."""
    if scipy.sparse.issparse(m):
        m = m.toarray()
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    try:
        return np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue iteration failed: {exc}") from exc


def expm_apply(m, v: np.ndarray, t: float) -> np.ndarray:
    """exp(t*m) @ v for dense or sparse m; exact passthrough at t = 0."""
    v = np.asarray(v)
    n = m.shape[0]
    if m.shape[0] != m.shape[1] or v.shape[0] != n:
        raise DimensionError(f"shape mismatch: m {m.shape} vs v {v.shape}")
    if t == 0:
        return v.copy()
    if scipy.sparse.issparse(m):
        a = (m * t).tocsr()
    else:
        a = np.asarray(m) * t
    return scipy.sparse.linalg.expm_multiply(a, v)


def unitary_apply(h: np.ndarray, psi: np.ndarray, t: float) -> np.ndarray:
    """exp(-i t H) @ psi via the eigendecomposition of Hermitian H."""
    psi = np.asarray(psi, dtype=complex)
    es = eig_hermitian(h)
    if psi.shape[0] != es.vectors.shape[0]:
        raise DimensionError("state dimension does not match the Hamiltonian")
    phases = np.exp(-1j * t * es.values)
    return es.vectors @ (phases * (es.vectors.conj().T @ psi))
