"""Nonlinear continuation of holomorphic disks bounding on perturbed real
projective space.

The ambient space is complex projective (m+1)-space with homogeneous
coordinates in C^(m+2); the unperturbed totally real submanifold is real
projective space, deformed to the graph ``P' = {[x + i eps u(x)] : |x| = 1}``
for an odd polynomial map u.  Disks are holomorphic maps of the unit disk
stored as truncated Taylor series of their homogeneous components.  Every
real projective line bounds two such disks (one per orientation) and the
whole family is swept by Gauss-Newton continuation over the Grassmannian of
oriented 2-planes.

All interior equations are eliminated by the Taylor parameterization; the
nonlinear operator is pure boundary collocation: at each angle the boundary
point is pulled back through the graph map and its deviation from being
real is the residual.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import _systems
from .config import NewtonConfig
from .errors import ConfigError, ConvergenceError, TotallyRealViolation

__all__ = [
    "AmbientModel",
    "PerturbationSpec",
    "DiskMap",
    "standard_half_line",
    "boundary_residual",
    "newton_disk",
    "NewtonInfo",
    "linearization_kernel_dim",
    "tangent_dimension",
]


# ---------------------------------------------------------------------------
# ambient space and perturbation


@dataclass(frozen=True)
class AmbientModel:
    """Complex projective (m+1)-space with its standard affine atlas."""

    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ConfigError("need m >= 1")

    @property
    def n_components(self) -> int:
        return self.m + 2

    @staticmethod
    def active_chart(w: np.ndarray) -> np.ndarray:
        """Index of the largest-modulus coordinate (last axis)."""
        return np.argmax(np.abs(w), axis=-1)

    @staticmethod
    def quadric(w: np.ndarray) -> np.ndarray:
        """The diagnostic quadratic form sum_i w_i^2."""
        return np.sum(np.asarray(w) ** 2, axis=-1)


@dataclass(frozen=True)
class PerturbationSpec:
    """Graph perturbation ``x -> [x + i eps u(x)]`` of real projective space.

    ``u`` has a linear part (a matrix) and homogeneous cubic terms, so it is
    odd by construction and descends to projective space.  ``cubic`` is a
    tuple of ``(component, (j, k, l), coefficient)`` monomial entries.
    """

    m: int
    epsilon: float
    linear: np.ndarray | None = None
    cubic: tuple = ()

    def __post_init__(self):
        n = self.m + 2
        if self.linear is not None:
            lin = np.asarray(self.linear, dtype=float)
            if lin.shape != (n, n):
                raise ConfigError(f"linear part must be {n}x{n}")
            object.__setattr__(self, "linear", lin)
        for comp, mono, _ in self.cubic:
            if not (0 <= comp < n) or len(mono) != 3 \
                    or not all(0 <= j < n for j in mono):
                raise ConfigError(f"bad cubic term ({comp}, {tuple(mono)})")

    @property
    def n_components(self) -> int:
        return self.m + 2

    def u(self, x: np.ndarray) -> np.ndarray:
        """The odd map u at points x (last axis of length m+2)."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        if self.linear is not None:
            out = out + x @ self.linear.T
        for comp, (j, k, l), c in self.cubic:
            out[..., comp] += c * x[..., j] * x[..., k] * x[..., l]
        return out

    def du(self, x: np.ndarray) -> np.ndarray:
        """Jacobian of u, shape (..., m+2, m+2)."""
        x = np.asarray(x, dtype=float)
        n = self.n_components
        out = np.zeros(x.shape[:-1] + (n, n))
        if self.linear is not None:
            out = out + self.linear
        for comp, (j, k, l), c in self.cubic:
            out[..., comp, j] += c * x[..., k] * x[..., l]
            out[..., comp, k] += c * x[..., j] * x[..., l]
            out[..., comp, l] += c * x[..., j] * x[..., k]
        return out

    def embed(self, x: np.ndarray) -> np.ndarray:
        """Ambient homogeneous coordinates of the point over x on the sphere."""
        return np.asarray(x, dtype=float) + 1j * self.epsilon * self.u(x)

    def validate_totally_real(self, samples: int = 300, seed: int = 1,
                              min_det: float = 1e-6) -> float:
        """Sample the frame condition for P'; raise when it degenerates.

        At each sample the affine-chart tangent vectors of P' must be
        complex-linearly independent; returns the smallest |det| found.
        """
        rng = np.random.default_rng(seed)
        n = self.n_components
        worst = np.inf
        for _ in range(samples):
            x = rng.standard_normal(n)
            x /= np.linalg.norm(x)
            tangent = _sphere_tangent_basis(x)
            psi = self.embed(x)
            dpsi = tangent + 1j * self.epsilon * (self.du(x) @ tangent.T).T
            c = int(np.argmax(np.abs(psi)))
            idx = [i for i in range(n) if i != c]
            # d(psi_k / psi_c) along each tangent direction
            rows = (dpsi[:, idx] * psi[c] - np.outer(dpsi[:, c], psi[idx])) / psi[c] ** 2
            det = abs(np.linalg.det(rows))
            worst = min(worst, det)
        if worst <= min_det:
            raise TotallyRealViolation(
                f"perturbed submanifold fails the frame condition: "
                f"min |det| = {worst:.3e} <= {min_det:.1e} (epsilon too large)")
        return float(worst)


def _sphere_tangent_basis(x: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the tangent space of the sphere at x, rows."""
    n = x.shape[0]
    basis = np.linalg.svd(x[None, :])[2][1:]
    return basis.reshape(n - 1, n)


def odd_cubic_harmonic(m: int, component: int = 0, axis: int = 1,
                       scale: float = 1.0) -> tuple:
    """A single odd cubic term u_component = scale * x_axis^3, for configs."""
    return ((component, (axis, axis, axis), scale),)


# ---------------------------------------------------------------------------
# disk maps


@dataclass(frozen=True)
class DiskMap:
    """Holomorphic map to projective space via homogeneous Taylor components.

    ``coeffs[c, j]`` is the degree-j Taylor coefficient of component c.
    ``chart`` is the designated normalization component and ``gauge`` holds
    the three real slice values that pin the disk reparameterization group.
    """

    coeffs: np.ndarray
    chart: int = 0
    gauge: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 2:
            raise ValueError("coeffs must be (m+2, K+1)")
        object.__setattr__(self, "coeffs", c)

    @property
    def n_components(self) -> int:
        return self.coeffs.shape[0]

    @property
    def degree(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def components(self) -> tuple:
        from .spectral import TaylorDisk
        return tuple(TaylorDisk(self.coeffs[c]) for c in range(self.n_components))

    def center(self) -> np.ndarray:
        return self.coeffs[:, 0].copy()

    def evaluate(self, z) -> np.ndarray:
        """Homogeneous coordinates, shape (*z.shape, m+2)."""
        zz = np.atleast_1d(np.asarray(z, dtype=complex))
        acc = np.zeros(zz.shape + (self.n_components,), dtype=complex)
        for j in range(self.degree, -1, -1):
            acc = acc * zz[..., None] + self.coeffs[:, j]
        return acc.reshape(np.shape(z) + (self.n_components,))

    def boundary_values(self, thetas: np.ndarray) -> np.ndarray:
        return self.evaluate(np.exp(1j * thetas))

    def pad_to(self, degree: int) -> "DiskMap":
        if degree < self.degree:
            raise ValueError("pad_to cannot shrink")
        c = np.zeros((self.n_components, degree + 1), dtype=complex)
        c[:, : self.degree + 1] = self.coeffs
        return replace(self, coeffs=c)

    def normalized(self, samples: int = 256) -> "DiskMap":
        """Scale and phase normalization of the homogeneous lift.

        The designated chart component gets max boundary modulus one and its
        largest coefficient is rotated to the positive real axis.
        """
        from .spectral import sample_angles
        bv = self.boundary_values(sample_angles(samples))
        peak = float(np.max(np.abs(bv[:, self.chart])))
        if peak <= 0:
            raise ConvergenceError("chart component vanishes on the boundary")
        row = self.coeffs[self.chart]
        lead = row[int(np.argmax(np.abs(row)))]
        factor = np.exp(-1j * np.angle(lead)) / peak
        return replace(self, coeffs=self.coeffs * factor)

    def projective_distance(self, other: "DiskMap") -> float:
        """Coefficient distance after aligning the common complex scale."""
        a = self.coeffs.ravel()
        b = other.coeffs.ravel()
        denom = np.vdot(b, b)
        lam = np.vdot(b, a) / denom if denom != 0 else 1.0
        return float(np.linalg.norm(a - lam * b) / max(np.linalg.norm(a), 1e-300))

    def min_boundary_modulus(self, samples: int = 256) -> float:
        """Smallest pointwise sup-norm of the lift on the boundary grid."""
        from .spectral import sample_angles
        bv = self.boundary_values(sample_angles(samples))
        return float(np.min(np.max(np.abs(bv), axis=1)))


def standard_half_line(u, v, degree: int = 1, orth_tol: float = 1e-12) -> DiskMap:
    """The half of the projective line over the oriented plane span(u, v).

    ``f(z) = (1 + z) u + i (1 - z) v``; the boundary runs along the real
    points ``cos(theta/2) u + sin(theta/2) v`` and the center ``u + i v``
    is the unique interior point on the diagnostic quadric.  Flipping the
    orientation (v -> -v) produces the opposite half.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if abs(np.dot(u, u) - 1) > orth_tol or abs(np.dot(v, v) - 1) > orth_tol \
            or abs(np.dot(u, v)) > orth_tol:
        raise ConfigError("u, v must be orthonormal")
    n = u.shape[0]
    coeffs = np.zeros((n, max(degree, 1) + 1), dtype=complex)
    coeffs[:, 0] = u + 1j * v
    coeffs[:, 1] = u - 1j * v
    chart = int(np.argmax(np.abs(coeffs[:, 0]) + np.abs(coeffs[:, 1])))
    return DiskMap(coeffs=coeffs, chart=chart)


# ---------------------------------------------------------------------------
# boundary straightening and residual


@dataclass
class _BoundaryState:
    """Per-angle warm data: straightening scale and frozen active chart."""

    lam: np.ndarray        # complex, shape (T,)
    charts: np.ndarray     # int, shape (T,)


def _init_state(w: np.ndarray) -> _BoundaryState:
    charts = np.argmax(np.abs(w), axis=1)
    wc = np.take_along_axis(w, charts[:, None], axis=1)[:, 0]
    norms = np.linalg.norm(w, axis=1)
    lam = np.conj(wc) / (np.abs(wc) * norms)
    return _BoundaryState(lam=lam, charts=charts)


def _straighten(w: np.ndarray, pert: PerturbationSpec,
                state: _BoundaryState, cfg: NewtonConfig):
    """Solve, per angle, for the scale lambda sending w onto the real slice.

    Unknowns are Re/Im of lambda; equations are the active-chart component
    of ``Im(lambda w) - eps u(Re(lambda w))`` and the unit-norm condition on
    ``Re(lambda w)``.  Returns the straightened real points x, the full
    defect vectors, and the updated state.
    """
    t = w.shape[0]
    eps = pert.epsilon
    lam = state.lam.copy()
    charts = state.charts
    rows = np.arange(t)
    wre, wim = w.real, w.imag

    for it in range(cfg.inner_max_iter):
        x = lam.real[:, None] * wre - lam.imag[:, None] * wim
        y = lam.real[:, None] * wim + lam.imag[:, None] * wre
        ux = pert.u(x)
        h1 = y[rows, charts] - eps * ux[rows, charts]
        h2 = np.sum(x * x, axis=1) - 1.0
        err = np.maximum(np.abs(h1), np.abs(h2))
        if np.max(err) < cfg.inner_tol:
            break
        dux = pert.du(x)[rows, charts]          # (T, n): gradient of u_c
        j11 = wim[rows, charts] - eps * np.sum(dux * wre, axis=1)
        j12 = wre[rows, charts] + eps * np.sum(dux * (-wim), axis=1)
        j21 = 2.0 * np.sum(x * wre, axis=1)
        j22 = -2.0 * np.sum(x * wim, axis=1)
        det = j11 * j22 - j12 * j21
        if np.min(np.abs(det)) < 1e-14:
            raise ConvergenceError(
                "straightening map degenerate at a boundary angle "
                "(chart breakdown or epsilon too large)")
        dre = (-h1 * j22 + h2 * j12) / det
        dim_ = (-j11 * h2 + j21 * h1) / det
        lam = lam + dre + 1j * dim_
    else:
        raise ConvergenceError("boundary straightening did not converge")

    x = lam.real[:, None] * wre - lam.imag[:, None] * wim
    y = lam.real[:, None] * wim + lam.imag[:, None] * wre
    defect = y - eps * pert.u(x)
    state_out = _BoundaryState(lam=lam, charts=charts)
    return x, defect, state_out


def _residual_rows(w: np.ndarray, pert: PerturbationSpec,
                   state: _BoundaryState, cfg: NewtonConfig):
    """Off-chart defect components, flattened: shape (T * (m+1),)."""
    t, n = w.shape
    x, defect, state = _straighten(w, pert, state, cfg)
    mask = np.ones((t, n), dtype=bool)
    mask[np.arange(t), state.charts] = False
    return defect[mask].reshape(t, n - 1).ravel(), x, state


def boundary_residual(disk: DiskMap, pert: PerturbationSpec,
                      thetas: np.ndarray,
                      cfg: NewtonConfig = NewtonConfig()) -> np.ndarray:
    """Defect of the disk boundary from P' at the given angles.

    Zero exactly when every sampled boundary point lies on the perturbed
    submanifold; entries are the imaginary parts in the straightened chart,
    (m+1) per angle.
    """
    w = disk.boundary_values(thetas)
    res, _, _ = _residual_rows(w, pert, _init_state(w), cfg)
    return res.reshape(thetas.shape[0], disk.n_components - 1)


# ---------------------------------------------------------------------------
# gauge machinery


def _anchor_basis(q: np.ndarray) -> np.ndarray:
    """Complex basis of the directions pinned at the disk center.

    Rows span the Hermitian-orthogonal complement of {q, conj(q)}; the
    component of f(0) along them measures genuine moduli motion while the
    free complement (the quadric normal) absorbs the perturbation of the
    incidence point.
    """
    n = q.shape[0]
    top = np.stack([np.conj(q), q])     # rows pair against q and conj(q)
    _, _, vh = np.linalg.svd(top)
    return vh[2:]                        # (n-2, n) = (m, n)


def _linear_rows(disk_ref: DiskMap, q: np.ndarray | None,
                 include_anchors: bool = True):
    """Realified constant rows: anchor rows (2m) and three gauge slices.

    Anchor rows: the components of f(0) along the anchor basis vanish,
    pinning the disk to its grid node.  Slice rows: the quadric pairing
    ``q . f(0)`` keeps its warm-start value (this pins the two disk
    translations, which move the center transversally to the quadric) and
    the rotation slice pins the phase along ``i z f'(z)`` of the warm
    start.  Returns (matrix, targets, slice_values).
    """
    n, kk = disk_ref.n_components, disk_ref.degree
    ncoef = n * (kk + 1)

    def coeff_index(c, j):
        return c * (kk + 1) + j

    complex_rows = []
    slice_center = (0.0, 0.0)
    if include_anchors and q is not None:
        for b in _anchor_basis(q):
            row = np.zeros(ncoef, dtype=complex)
            for c in range(n):
                row[coeff_index(c, 0)] = np.conj(b[c])
            complex_rows.append((row, 0.0 + 0.0j))
    if q is not None:
        row = np.zeros(ncoef, dtype=complex)
        for c in range(n):
            row[coeff_index(c, 0)] = q[c]
        val = complex(np.sum(q * disk_ref.coeffs[:, 0]))
        complex_rows.append((row, val))
        slice_center = (float(val.real), float(val.imag))

    mat_c = np.array([r for r, _ in complex_rows]) if complex_rows else \
        np.zeros((0, ncoef), dtype=complex)
    tgt_c = np.array([t for _, t in complex_rows]) if complex_rows else \
        np.zeros(0, dtype=complex)
    mat = _systems.realify(mat_c, np.zeros_like(mat_c))
    tgt = np.concatenate([tgt_c.real, tgt_c.imag])

    # rotation slice: one real row Re <i z f_ref', delta f> = target
    rot = np.zeros(ncoef, dtype=complex)
    for c in range(n):
        for j in range(kk + 1):
            rot[coeff_index(c, j)] = np.conj(1j * j * disk_ref.coeffs[c, j])
    rot_real = _systems.realify(rot[None, :], np.zeros((1, ncoef), dtype=complex))[:1]
    rot_target = float(np.real(rot @ disk_ref.coeffs.ravel()))
    mat = np.vstack([mat, rot_real])
    tgt = np.concatenate([tgt, [rot_target]])
    slice_values = (slice_center[0], slice_center[1], rot_target)
    return mat, tgt, slice_values


def _gauge_matrix(disk: DiskMap, include_mobius: bool = False) -> np.ndarray:
    """Orthonormal span of gauge-orbit tangent directions, realified.

    Always contains the projective rescalings ``f z^j`` and ``i f z^j`` of
    the homogeneous lift; with ``include_mobius`` also the three disk
    reparameterization directions (rotation ``i z f'`` and the two
    translations ``f' - z^2 f'``, ``i f' + i z^2 f'``), truncated back to
    the ambient degree.
    """
    n, kk = disk.n_components, disk.degree
    mats = []
    for j in range(kk + 1):
        shifted = np.zeros((n, kk + 1), dtype=complex)
        shifted[:, j:] = disk.coeffs[:, : kk + 1 - j]
        mats.append(shifted)
        mats.append(1j * shifted)
    if include_mobius:
        deriv = disk.coeffs[:, 1:] * np.arange(1, kk + 1)
        fp = np.zeros((n, kk + 1), dtype=complex)
        fp[:, : kk] = deriv
        zfp = np.zeros((n, kk + 1), dtype=complex)
        zfp[:, 1: kk + 1] = deriv
        z2fp = np.zeros((n, kk + 1), dtype=complex)
        z2fp[:, 2: kk + 1] = deriv[:, : kk - 1]
        mats.extend([1j * zfp, fp - z2fp, 1j * (fp + z2fp)])
    cols = [np.concatenate([m.ravel().real, m.ravel().imag]) for m in mats]
    q, _ = np.linalg.qr(np.array(cols).T)
    return q


# ---------------------------------------------------------------------------
# Gauss-Newton solver


@dataclass(frozen=True)
class NewtonInfo:
    iterations: int
    residuals: tuple
    converged: bool
    boundary_residual: float


def _flatten(coeffs: np.ndarray) -> np.ndarray:
    flat = coeffs.ravel()
    return np.concatenate([flat.real, flat.imag])


def _unflatten(x: np.ndarray, n: int, kk: int) -> np.ndarray:
    half = x.shape[0] // 2
    return (x[:half] + 1j * x[half:]).reshape(n, kk + 1)


def _boundary_block(coeffs: np.ndarray, powers: np.ndarray,
                    pert: PerturbationSpec, state: _BoundaryState,
                    cfg: NewtonConfig):
    w = powers @ coeffs.T        # (T, n)
    return _residual_rows(w, pert, state, cfg)


def newton_disk(start: DiskMap, pert: PerturbationSpec,
                node_q: np.ndarray | None = None,
                cfg: NewtonConfig = NewtonConfig(),
                n_angles: int | None = None,
                reference: DiskMap | None = None) -> tuple[DiskMap, NewtonInfo]:
    """Gauss-Newton solve for a disk with boundary on P'.

    ``node_q`` pins the disk to its grid node through the center anchor
    rows; without it only the three reparameterization slices are imposed
    and the minimum-norm step handles the remaining moduli directions.
    Steps are minimum-norm, so the projective rescaling redundancy of the
    homogeneous lift never drifts; the lift is renormalized once at the
    end.  Convergence means the sup-norm of the boundary defect (and of the
    slice equations) is below ``cfg.tol``.
    """
    n, kk = start.n_components, start.degree
    t = n_angles or max(48, 4 * kk + 16)
    thetas = 2.0 * np.pi * np.arange(t) / t
    powers = np.exp(1j * np.outer(thetas, np.arange(kk + 1)))

    ref = reference if reference is not None else start
    lin_mat, lin_tgt, slice_values = _linear_rows(ref, node_q)

    coeffs = start.coeffs.copy()
    w0 = powers @ coeffs.T
    state = _init_state(w0)
    residuals = []
    converged = False
    it = 0

    for it in range(cfg.max_iter + 1):
        r_bnd, _, state = _boundary_block(coeffs, powers, pert, state, cfg)
        r_lin = lin_mat @ _flatten(coeffs) - lin_tgt
        res_inf = max(float(np.max(np.abs(r_bnd))) if r_bnd.size else 0.0,
                      float(np.max(np.abs(r_lin))) if r_lin.size else 0.0)
        residuals.append(res_inf)
        if res_inf < cfg.tol:
            converged = True
            break
        if it == cfg.max_iter:
            break

        j_bnd = _fd_jacobian(coeffs, powers, pert, state, cfg, r_bnd)
        jac = np.vstack([j_bnd, lin_mat])
        rhs = np.concatenate([r_bnd, r_lin])
        step, _ = _systems.min_norm_lstsq(jac, -rhs, rcond=cfg.pinv_rcond)

        base = np.linalg.norm(rhs)
        x0 = _flatten(coeffs)
        accepted = None
        scale = 1.0
        for _ in range(5):
            trial = _unflatten(x0 + scale * step, n, kk)
            try:
                r_try, _, _ = _boundary_block(trial, powers, pert, state, cfg)
            except ConvergenceError:
                scale *= 0.5
                continue
            r_lin_try = lin_mat @ _flatten(trial) - lin_tgt
            accepted = trial
            if np.linalg.norm(np.concatenate([r_try, r_lin_try])) < base:
                break
            scale *= 0.5
        if accepted is None:
            raise ConvergenceError("Gauss-Newton step rejected; the start is "
                                   "outside the solver basin")
        coeffs = accepted

    disk = DiskMap(coeffs=coeffs, chart=start.chart, gauge=slice_values)
    bres = float(np.max(np.abs(boundary_residual(disk, pert, thetas, cfg))))
    info = NewtonInfo(iterations=it, residuals=tuple(residuals),
                      converged=converged, boundary_residual=bres)
    if not converged:
        raise ConvergenceError(
            f"disk solve stalled at residual {residuals[-1]:.3e} "
            f"after {it} iterations")
    return disk, info


def _fd_jacobian(coeffs: np.ndarray, powers: np.ndarray,
                 pert: PerturbationSpec, state: _BoundaryState,
                 cfg: NewtonConfig, r0: np.ndarray) -> np.ndarray:
    """Central-difference Jacobian of the boundary block."""
    n, kk1 = coeffs.shape
    x0 = _flatten(coeffs)
    h = cfg.fd_step
    jac = np.zeros((r0.shape[0], x0.shape[0]))
    for i in range(x0.shape[0]):
        xp = x0.copy()
        xp[i] += h
        rp, _, _ = _boundary_block(_unflatten(xp, n, kk1 - 1), powers, pert,
                                   state, cfg)
        xm = x0.copy()
        xm[i] -= h
        rm, _, _ = _boundary_block(_unflatten(xm, n, kk1 - 1), powers, pert,
                                   state, cfg)
        jac[:, i] = (rp - rm) / (2.0 * h)
    return jac


# ---------------------------------------------------------------------------
# linearization diagnostics


def linearization_kernel_dim(disk: DiskMap, pert: PerturbationSpec,
                             node_q: np.ndarray | None = None,
                             with_slices: bool = False,
                             with_anchors: bool = False,
                             cfg: NewtonConfig = NewtonConfig(),
                             n_angles: int | None = None) -> int:
    """Kernel dimension of the boundary linearization, modulo rescaling.

    Without slices this counts the full map moduli (2m genuine directions
    plus the three disk reparameterizations); with the three slices it
    counts the geometric tangent dimension 2m; adding the node anchors as
    well pins everything.  Directions along the projective rescaling orbit
    of the homogeneous lift are quotiented out, since they do not move the
    map to projective space.
    """
    n, kk = disk.n_components, disk.degree
    t = n_angles or max(48, 4 * kk + 16)
    thetas = 2.0 * np.pi * np.arange(t) / t
    powers = np.exp(1j * np.outer(thetas, np.arange(kk + 1)))
    w = powers @ disk.coeffs.T
    state = _init_state(w)
    r0, _, state = _residual_rows(w, pert, state, cfg)
    jac = _fd_jacobian(disk.coeffs, powers, pert, state, cfg, r0)
    if with_slices:
        lin_mat, _, _ = _linear_rows(disk, node_q, include_anchors=with_anchors)
        jac = np.vstack([jac, lin_mat])
    kernel = _systems.nullspace(jac, cfg.tangent_rank_tol)
    if kernel.shape[1] == 0:
        return 0
    gauge = _gauge_matrix(disk, include_mobius=with_slices)
    residual = kernel - gauge @ (gauge.T @ kernel)
    sing = np.linalg.svd(residual, compute_uv=False)
    return int(np.sum(sing > 0.5))


def tangent_dimension(disk: DiskMap, pert: PerturbationSpec,
                      node_q: np.ndarray,
                      cfg: NewtonConfig = NewtonConfig()) -> int:
    """Moduli tangent dimension at a converged disk (slices on, node free)."""
    return linearization_kernel_dim(disk, pert, node_q=node_q,
                                    with_slices=True, with_anchors=False,
                                    cfg=cfg)
