"""Symmetric eigendecomposition by cyclic Jacobi rotations.

Numerical substrate for the factor analysis and classical MDS stages. The
full spectrum is always computed: the Kaiser retention rule needs every
eigenvalue to form explained-variance shares.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numba import njit

OFF_DIAGONAL_TOL = 1e-12
MAX_SWEEPS = 100
SYMMETRY_RTOL = 1e-9


@dataclass(frozen=True)
class EigenResult:
    """Eigenvalues sorted descending; vectors[:, k] is the orthonormal eigenvector for values[k]."""

    values: np.ndarray
    vectors: np.ndarray


@njit(cache=True)
def _jacobi_sweeps(a, v, tol_off, skip_tol, max_sweeps):
    # Cyclic-by-rows Jacobi on the full symmetric matrix `a`, accumulating
    # rotations into `v`. Rotations with |a[p,q]| <= skip_tol are skipped:
    # their combined off-diagonal mass stays below tol_off by construction.
    n = a.shape[0]
    sweeps = 0
    converged = False
    while sweeps < max_sweeps:
        off2 = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off2 += a[i, j] * a[i, j]
        if math.sqrt(2.0 * off2) <= tol_off:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip_tol:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < 1e-36 * abs(diff):
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                tau = s / (1.0 + c)
                a[p, p] -= t * apq
                a[q, q] += t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for i in range(p):
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = aip - s * (aiq + tau * aip)
                    a[i, q] = aiq + s * (aip - tau * aiq)
                    a[p, i] = a[i, p]
                    a[q, i] = a[i, q]
                for i in range(p + 1, q):
                    api = a[p, i]
                    aiq = a[i, q]
                    a[p, i] = api - s * (aiq + tau * api)
                    a[i, q] = aiq + s * (api - tau * aiq)
                    a[i, p] = a[p, i]
                    a[q, i] = a[i, q]
                for i in range(q + 1, n):
                    api = a[p, i]
                    aqi = a[q, i]
                    a[p, i] = api - s * (aqi + tau * api)
                    a[q, i] = aqi + s * (api - tau * aqi)
                    a[i, p] = a[p, i]
                    a[i, q] = a[q, i]
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = vip - s * (viq + tau * vip)
                    v[i, q] = viq + s * (vip - tau * viq)
        sweeps += 1
    return sweeps, converged


def canonical_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip vector columns so each column's largest-magnitude entry is nonnegative."""
    out = vectors.copy()
    for k in range(out.shape[1]):
        lead = int(np.argmax(np.abs(out[:, k])))
        if out[lead, k] < 0.0:
            out[:, k] = -out[:, k]
    return out


def sym_eig(s: np.ndarray) -> EigenResult:
    """Full eigendecomposition of a symmetric real matrix.

    Cyclic Jacobi sweeps run until the off-diagonal Frobenius mass drops
    below 1e-12 times the Frobenius norm of the input (or 100 sweeps).
    Values are sorted descending, ties keeping the smaller original
    diagonal index first, and each eigenvector's largest-magnitude entry
    is made nonnegative so output is reproducible.
    """
    s = np.asarray(s, dtype=np.float64)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError(f"matrix must be square, got shape {s.shape}")
    n = s.shape[0]
    if n == 0:
        raise ValueError("matrix is empty")
    scale = float(np.max(np.abs(s))) if n else 0.0
    asym = float(np.max(np.abs(s - s.T)))
    if asym > SYMMETRY_RTOL * max(scale, 1.0):
        raise ValueError(f"matrix is not symmetric: max asymmetry {asym:.3e} exceeds tolerance")

    if n == 1:
        return EigenResult(values=s.diagonal().copy(), vectors=np.ones((1, 1)))

    a = 0.5 * (s + s.T)  # exact no-op for symmetric input
    v = np.eye(n)
    norm_f = float(np.linalg.norm(a))
    tol_off = OFF_DIAGONAL_TOL * norm_f
    skip_tol = tol_off / (2.0 * n)
    sweeps, converged = _jacobi_sweeps(a, v, tol_off, skip_tol, MAX_SWEEPS)
    if not converged:
        warnings.warn(f"Jacobi iteration stopped at the {sweeps}-sweep cap before reaching tolerance")

    values = a.diagonal().copy()
    order = np.argsort(-values, kind="stable")
    return EigenResult(values=values[order], vectors=canonical_signs(v[:, order]))
