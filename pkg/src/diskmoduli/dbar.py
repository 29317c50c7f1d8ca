"""The linear dbar boundary value problem on the disk.

Solves ``dbar f = phi`` with boundary trace constrained to the totally real
fibers of a boundary condition.  Unknowns are Taylor coefficients, so
holomorphicity is built in: the inhomogeneous term is absorbed by a Cauchy
transform particular solution and the rest is boundary collocation for the
holomorphic correction.  Kernels, cokernels and the numerical index are all
SVD rank decisions on the same family of realified systems.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _systems
from .boundary import BoundaryFrame, GLoop, as_gloop, frame_to_gloop
from .config import DEFAULT_TOLS, Tolerances
from .errors import ConvergenceError, TruncationError
from .spectral import (DiskGrid, FourierLoop, ParticularSolution, RHSForm,
                       TaylorDisk, cauchy_pompeiu, dbar_residual,
                       sample_angles)

__all__ = [
    "LinearBVP",
    "DiskSolution",
    "ObstructionCertificate",
    "kernel_basis",
    "solve_bvp",
    "numerical_index",
    "cokernel_dimension",
    "straighten_frame",
    "StraightenedCondition",
]


def _collocation_count(k: int, g: GLoop) -> int:
    # oversample past the full frequency content of f - G conj(f)
    return 2 * (2 * k + max(g.order, g.dim) + 4)


@dataclass(frozen=True)
class LinearBVP:
    """Problem data: condition, right-hand side, truncation, collocation."""

    condition: object                 # GLoop | BoundaryFrame | FourierLoop
    rhs: RHSForm | None = None
    truncation: int = 24
    collocation: int | None = None    # number of boundary angles (2M)
    tols: Tolerances = DEFAULT_TOLS

    def gloop(self) -> GLoop:
        return as_gloop(self.condition, self.tols)

    def angles(self, g: GLoop) -> np.ndarray:
        two_m = self.collocation or _collocation_count(self.truncation, g)
        if two_m < 2 * (2 * self.truncation + g.dim):
            raise ValueError("collocation undersamples the truncation: "
                             f"2M = {two_m} < 2(2K + n)")
        return sample_angles(two_m)


@dataclass(frozen=True)
class DiskSolution:
    """Solution record for a solvable problem."""

    holomorphic: TaylorDisk           # the boundary-fitted holomorphic part
    particular: ParticularSolution | None
    interior_residual: float
    boundary_residual: float
    kernel_projection: np.ndarray     # coefficients against the kernel basis
    lstsq_residual: float

    def evaluate(self, points) -> np.ndarray:
        vals = self.holomorphic.evaluate(points)
        if self.particular is not None:
            vals = vals + self.particular.evaluate(points)
        return vals


@dataclass(frozen=True)
class ObstructionCertificate:
    """Numerical realization of the cokernel of an unsolvable problem.

    ``loops`` spans the obstruction functionals ``r -> mean Re(zeta^T r)``;
    ``pairings`` are their values on the reduced boundary data, and at
    least one of them is significantly nonzero exactly when the problem is
    obstructed.
    """

    dimension: int
    loops: tuple
    pairings: tuple
    lstsq_residual: float


def _boundary_matrix(g: GLoop, k: int, thetas: np.ndarray) -> np.ndarray:
    """Realified collocation matrix of ``a -> f_a - G conj(f_a)`` on the circle."""
    n = g.dim
    gv = g.loop.evaluate(thetas)                       # (T, n, n)
    t = thetas.shape[0]
    powers = np.exp(1j * np.outer(thetas, np.arange(k + 1)))   # (T, K+1)
    p = np.zeros((t * n, (k + 1) * n), dtype=complex)
    q = np.zeros_like(p)
    for j in range(k + 1):
        blk = powers[:, j]
        for c in range(n):
            p[c::n, j * n + c] = blk
        q[:, j * n:(j + 1) * n] -= (gv * np.conj(blk)[:, None, None]).reshape(t * n, n)
    return _systems.realify(p, q)


def _coeffs_to_disk(x: np.ndarray, k: int, n: int) -> TaylorDisk:
    a = _systems.complexify(x).reshape(k + 1, n)
    return TaylorDisk(a if n > 1 else a[:, 0])


def kernel_basis(condition, k: int = 24, rank_tol: float | None = None,
                 tols: Tolerances = DEFAULT_TOLS,
                 expected_dim: int | None = None) -> list[TaylorDisk]:
    """Orthonormal real basis of holomorphic disks with boundary in E.

    The cardinality equals ``h0`` of the index report; pass
    ``expected_dim`` to enforce that consistency check.
    """
    g = as_gloop(condition, tols)
    tau = tols.rank_tol if rank_tol is None else rank_tol
    a = _systems.twisted_system(g.loop, k, 0)
    null = _systems.nullspace(a, tau)
    if expected_dim is not None and null.shape[1] != expected_dim:
        raise TruncationError(
            f"kernel dimension {null.shape[1]} != expected {expected_dim}; "
            "truncation too small for this condition")
    basis = []
    for i in range(null.shape[1]):
        basis.append(_coeffs_to_disk(_fix_sign(null[:, i]), k, g.dim))
    return basis


def _fix_sign(x: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(x)))
    return -x if x[i] < 0 else x


def cokernel_dimension(condition, k: int = 24, rank_tol: float | None = None,
                       tols: Tolerances = DEFAULT_TOLS) -> int:
    """Real dimension of the obstruction space of a condition."""
    g = as_gloop(condition, tols)
    tau = tols.rank_tol if rank_tol is None else rank_tol
    return _systems.nullity(_systems.cokernel_system(g.loop, k), tau)


def _certificate(g: GLoop, k: int, tau: float,
                 thetas: np.ndarray, rhs_vals: np.ndarray,
                 lstsq_residual: float) -> ObstructionCertificate:
    a = _systems.cokernel_system(g.loop, k)
    null = _systems.nullspace(a, tau)
    n = g.dim
    loops, pairings = [], []
    for i in range(null.shape[1]):
        z = _systems.complexify(_fix_sign(null[:, i])).reshape(k, n)
        coeffs = np.zeros((2 * k + 1, n), dtype=complex)
        coeffs[k + 1:] = z
        zeta = FourierLoop(coeffs)
        zv = zeta.evaluate(thetas)
        pairing = float(np.mean(np.real(np.einsum("ti,ti->t", zv, rhs_vals))))
        loops.append(zeta)
        pairings.append(pairing)
    return ObstructionCertificate(dimension=len(loops), loops=tuple(loops),
                                  pairings=tuple(pairings),
                                  lstsq_residual=lstsq_residual)


def solve_bvp(problem: LinearBVP):
    """Solve the boundary value problem, or certify its obstruction.

    Returns a :class:`DiskSolution` when the least-squares collocation
    system for the holomorphic correction meets the residual tolerance;
    the solution is the minimum-norm one, so its projection on the kernel
    is zero.  Otherwise returns an :class:`ObstructionCertificate` whose
    dimension matches ``h1`` of the condition.
    """
    tols = problem.tols
    g = problem.gloop()
    n = g.dim
    k = problem.truncation
    thetas = problem.angles(g)

    particular = None
    if problem.rhs is not None and np.any(np.abs(problem.rhs.values) > 0):
        if problem.rhs.dim != n:
            raise ValueError(f"rhs dimension {problem.rhs.dim} != condition {n}")
        particular = cauchy_pompeiu(problem.rhs, fit_tol=tols.cp_fit_tol)
        trace = particular.boundary.evaluate(thetas)
        trace = trace.reshape(thetas.shape[0], n)
        gv = g.loop.evaluate(thetas)
        rhs_vals = np.einsum("tij,tj->ti", gv, np.conj(trace)) - trace
    else:
        rhs_vals = np.zeros((thetas.shape[0], n), dtype=complex)

    a = _boundary_matrix(g, k, thetas)
    # realified rows stack the Re block over the Im block
    b = np.concatenate([rhs_vals.reshape(-1).real, rhs_vals.reshape(-1).imag])
    x, resid = _systems.min_norm_lstsq(a, b)
    scale = max(1.0, float(np.linalg.norm(b)))
    rel = resid / scale

    if rel > tols.residual_tol:
        if rel < tols.obstructed_tol:
            raise ConvergenceError(
                f"residual {rel:.3e} between solve ({tols.residual_tol:.1e}) "
                f"and obstruction ({tols.obstructed_tol:.1e}) thresholds")
        return _certificate(g, k, tols.rank_tol, thetas, rhs_vals, rel)

    holo = _coeffs_to_disk(x, k, n)
    null = _systems.nullspace(a, tols.rank_tol)
    kernel_proj = null.T @ x

    # independent residual measurements
    bres = _boundary_defect(g, holo, particular)
    ires = 0.0
    if particular is not None and problem.rhs.fn is not None:
        def f_eval(z):
            return holo.evaluate(z) + particular.evaluate(z)

        def phi_eval(z):
            return np.asarray(problem.rhs.fn(z), dtype=complex)

        ires = dbar_residual(f_eval, phi_eval)
    return DiskSolution(holomorphic=holo, particular=particular,
                        interior_residual=ires, boundary_residual=bres,
                        kernel_projection=kernel_proj, lstsq_residual=rel)


def _boundary_defect(g: GLoop, holo: TaylorDisk,
                     particular: ParticularSolution | None,
                     samples: int = 1024) -> float:
    thetas = sample_angles(samples)
    n = g.dim
    w = holo.boundary_loop().evaluate(thetas).reshape(samples, n)
    if particular is not None:
        w = w + particular.boundary.evaluate(thetas).reshape(samples, n)
    gv = g.loop.evaluate(thetas)
    defect = w - np.einsum("tij,tj->ti", gv, np.conj(w))
    scale = max(1.0, float(np.max(np.abs(w))))
    return float(np.max(np.abs(defect))) / (2.0 * scale)


def numerical_index(condition, k: int = 24, rank_tol: float | None = None,
                    tols: Tolerances = DEFAULT_TOLS) -> int:
    """dim ker - dim coker of the truncated boundary problem.

    Both terms are SVD kernel counts: the kernel of the homogeneous system
    and the kernel of the adjoint-side obstruction system.  The result
    equals Maslov index + n for every valid condition, but nothing here
    consults the winding number, so the identity is a genuine cross-check.
    """
    g = as_gloop(condition, tols)
    tau = tols.rank_tol if rank_tol is None else rank_tol
    h0 = _systems.nullity(_systems.twisted_system(g.loop, k, 0), tau)
    h1 = _systems.nullity(_systems.cokernel_system(g.loop, k), tau)
    return h0 - h1


# ---------------------------------------------------------------------------
# frame straightening


@dataclass(frozen=True)
class StraightenedCondition:
    """Change-of-frame data turning the condition into reality of B^{-1} f."""

    frame: BoundaryFrame
    gloop: GLoop
    inverse_loop: FourierLoop       # B^{-1} as a (trimmed) loop

    def reality_matrix(self, k: int, thetas: np.ndarray) -> np.ndarray:
        """Realified rows of ``a -> Im(B^{-1} f_a)`` at the given angles."""
        n = self.frame.dim
        binv = self.inverse_loop.evaluate(thetas)       # (T, n, n)
        t = thetas.shape[0]
        powers = np.exp(1j * np.outer(thetas, np.arange(k + 1)))
        rows = np.zeros((t * n, (k + 1) * n), dtype=complex)
        for j in range(k + 1):
            rows[:, j * n:(j + 1) * n] = (binv * powers[:, j][:, None, None]) \
                .reshape(t * n, n)
        # Im(M a) = (M a - conj(M) conj(a)) / 2i
        return _systems.realify(rows / 2j, -np.conj(rows) / 2j)


def straighten_frame(frame: BoundaryFrame, tols: Tolerances = DEFAULT_TOLS,
                     samples: int | None = None) -> StraightenedCondition:
    """Straightening data for a frame condition.

    The boundary condition becomes reality of ``B^{-1} f`` on the circle;
    solution sets agree with the ``G = B conj(B)^{-1}`` formulation.
    """
    frame.validate(tols)
    if samples is None:
        samples = max(256, 8 * (frame.loop.order + 1))
    thetas = sample_angles(samples)
    vals = frame.loop.evaluate(thetas)
    from .spectral import loop_from_samples
    inv = loop_from_samples(np.linalg.inv(vals)).trim(tols.loop_tail_tol * 1e-2)
    return StraightenedCondition(frame=frame,
                                 gloop=frame_to_gloop(frame, tols, samples),
                                 inverse_loop=inv)
