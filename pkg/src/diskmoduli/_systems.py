"""Realified linear systems for boundary problems of the form f = S conj(f).

Shared by the index scan in ``boundary`` and the kernel/cokernel machinery
in ``dbar``.  All unknowns are Taylor coefficients; the conjugate-linear
boundary conditions are written as real-linear systems on the stacked
real and imaginary parts.
"""

from __future__ import annotations

import numpy as np

from .spectral import FourierLoop


def realify(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Real form of the map ``a -> P a + Q conj(a)`` on stacked (Re a, Im a)."""
    return np.block([
        [p.real + q.real, -p.imag + q.imag],
        [p.imag + q.imag, p.real - q.real],
    ])


def complexify(x: np.ndarray) -> np.ndarray:
    """Inverse of the stacking used by :func:`realify` (vectors only)."""
    half = x.shape[0] // 2
    return x[:half] + 1j * x[half:]


def _gcoeff(g: FourierLoop, p: int, n: int) -> np.ndarray:
    if abs(p) > g.order:
        return np.zeros((n, n), dtype=complex)
    c = g.coeffs[p + g.order]
    return c if g.is_matrix else np.array([[c]])


def twisted_system(g: FourierLoop, k_max: int, twist: int) -> np.ndarray:
    """Real matrix whose kernel is {f : f = e^{-i m theta} G conj(f)}.

    Unknowns are the Taylor coefficients ``a_0 .. a_{k_max}`` of f (each in
    C^n); rows match every Fourier coefficient of
    ``f - e^{-i m theta} G conj(f)`` that can be nonzero, so the kernel of
    the truncated system consists exactly of the genuine degree-``k_max``
    solutions.
    """
    n = g.dim
    kg = g.order
    m = twist
    rows_lo = min(0, -kg - k_max - m)
    rows_hi = max(k_max, kg - m)
    n_rows = rows_hi - rows_lo + 1
    p = np.zeros((n_rows * n, (k_max + 1) * n), dtype=complex)
    q = np.zeros_like(p)
    eye = np.eye(n)
    for k in range(rows_lo, rows_hi + 1):
        r = (k - rows_lo) * n
        if 0 <= k <= k_max:
            p[r:r + n, k * n:(k + 1) * n] = eye
        for ell in range(0, k_max + 1):
            gc = _gcoeff(g, k + ell + m, n)
            if np.any(gc):
                q[r:r + n, ell * n:(ell + 1) * n] -= gc
    return realify(p, q)


def cokernel_system(g: FourierLoop, w_max: int) -> np.ndarray:
    """Real matrix whose kernel realizes the obstruction functionals.

    Unknowns are loops ``zeta`` supported on frequencies ``1 .. w_max``
    (each coefficient in C^n) satisfying ``zeta + conj(G^T zeta) = 0``; the
    functional ``r -> mean_theta Re(zeta^T r)`` then annihilates every
    achievable boundary defect, and the kernel dimension equals the
    cokernel dimension of the homogeneous boundary problem.
    """
    n = g.dim
    kg = g.order
    rows_lo = -kg - w_max
    rows_hi = max(w_max, kg - 1)
    n_rows = rows_hi - rows_lo + 1
    p = np.zeros((n_rows * n, w_max * n), dtype=complex)
    q = np.zeros_like(p)
    eye = np.eye(n)
    for k in range(rows_lo, rows_hi + 1):
        r = (k - rows_lo) * n
        if 1 <= k <= w_max:
            p[r:r + n, (k - 1) * n:k * n] = eye
        for ell in range(1, w_max + 1):
            gc = _gcoeff(g, -k - ell, n)
            if np.any(gc):
                q[r:r + n, (ell - 1) * n:ell * n] += np.conj(gc.T)
    return realify(p, q)


def singular_values(a: np.ndarray) -> np.ndarray:
    return np.linalg.svd(a, compute_uv=False)


def nullity(a: np.ndarray, rank_tol: float) -> int:
    """Number of singular values below ``rank_tol * sigma_max``."""
    s = singular_values(a)
    if s.size == 0 or s[0] == 0.0:
        return a.shape[1]
    return int(np.sum(s < rank_tol * s[0]))


def nullspace(a: np.ndarray, rank_tol: float) -> np.ndarray:
    """Orthonormal kernel basis as columns (real)."""
    u, s, vt = np.linalg.svd(a, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        return np.eye(a.shape[1])
    mask = np.concatenate([s < rank_tol * s[0],
                           np.ones(a.shape[1] - s.size, dtype=bool)])
    return vt.T[:, mask]


def min_norm_lstsq(a: np.ndarray, b: np.ndarray, rcond: float = 1e-12):
    """Minimum-norm least squares via SVD, returning (x, residual_norm)."""
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    if s.size and s[0] > 0:
        keep = s > rcond * s[0]
    else:
        keep = np.zeros_like(s, dtype=bool)
    coeff = np.zeros_like(s)
    ub = u.T @ b
    coeff[keep] = ub[keep] / s[keep]
    x = vt.T @ coeff
    return x, float(np.linalg.norm(a @ x - b))
