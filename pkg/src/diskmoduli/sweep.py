"""Moduli charts: sweeping disk families over the Grassmannian and querying
incidence families.

A chart holds one converged disk per grid node, produced by warm-started
Gauss-Newton continuation in breadth-first order from a seed node, with an
optional schedule of intermediate perturbation amplitudes.  Incidence
queries collect the disks whose boundary passes through a given point of
the perturbed submanifold and refine each with an interpolation condition,
spending moduli freedom to pin the boundary to the point.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import _systems
from .config import NewtonConfig
from .errors import ConfigError, ConvergenceError
from .grassmann import GrassmannGrid
from .moduli import (AmbientModel, DiskMap, PerturbationSpec, newton_disk,
                     standard_half_line, tangent_dimension)
from .moduli import (_boundary_block, _fd_jacobian, _flatten, _init_state,
                     _linear_rows, _straighten, _unflatten)

__all__ = [
    "NodeRecord",
    "ModuliChart",
    "sweep_moduli",
    "verify_unperturbed",
    "UnperturbedDiagnostics",
    "IncidenceMember",
    "IncidenceFamily",
    "incidence_family",
    "projective_distance_points",
]


# ---------------------------------------------------------------------------
# charts


@dataclass(frozen=True)
class NodeRecord:
    index: int
    label: tuple
    u: np.ndarray
    v: np.ndarray
    disk: DiskMap | None
    residual: float
    iterations: int
    tangent_dim: int            # -1 when not measured
    converged: bool

    @property
    def quadric_point(self) -> np.ndarray | None:
        if self.disk is None:
            return None
        c = self.disk.center()
        return c / np.linalg.norm(c)


@dataclass(frozen=True)
class ModuliChart:
    m: int
    epsilon: float
    truncation: int
    grid: GrassmannGrid
    perturbation: PerturbationSpec
    records: tuple
    partial: bool
    failed: tuple

    def record(self, index: int) -> NodeRecord:
        return self.records[index]

    def converged_records(self) -> list:
        return [r for r in self.records if r.converged]


def sweep_moduli(pert: PerturbationSpec, grid: GrassmannGrid,
                 truncation: int = 10, cfg: NewtonConfig = NewtonConfig(),
                 eps_schedule: int = 2, seed_node: int = 0,
                 measure_tangent: bool = False) -> ModuliChart:
    """Converge a disk at every grid node by warm-started continuation.

    Nodes are visited breadth-first from the seed; each is started from its
    converged parent when available, falling back to its own exact
    half-line pushed through ``eps_schedule`` uniform amplitude steps.  The
    recorded iteration count is the one at the target amplitude.  Failing
    nodes are recorded and mark the chart partial instead of aborting the
    sweep.
    """
    if pert.epsilon:
        pert.validate_totally_real()
    records: dict[int, NodeRecord] = {}
    order = grid.bfs_order(seed_node)
    solutions: dict[int, DiskMap] = {}

    for index, parent in order:
        u, v = grid.planes[index]
        q = u + 1j * v
        # the node's own half-line is branch-correct and O(epsilon) away;
        # the converged neighbor is the fallback for larger amplitudes
        attempts = [("schedule", None)]
        if parent is not None and parent in solutions:
            attempts.append(("parent", solutions[parent]))

        disk = info = None
        for kind, warm in attempts:
            try:
                if kind == "parent":
                    disk, info = newton_disk(warm, pert, node_q=q, cfg=cfg)
                else:
                    disk, info = _solve_by_schedule(u, v, q, pert, truncation,
                                                    cfg, eps_schedule)
                break
            except ConvergenceError:
                disk = info = None
        if disk is None:
            records[index] = NodeRecord(index, grid.labels[index], u, v, None,
                                        np.inf, -1, -1, False)
            continue
        disk = disk.normalized()
        tdim = tangent_dimension(disk, pert, q, cfg) if measure_tangent else -1
        records[index] = NodeRecord(index, grid.labels[index], u, v, disk,
                                    info.boundary_residual, info.iterations,
                                    tdim, True)
        solutions[index] = disk

    recs = tuple(records[i] for i in range(len(grid)))
    failed = tuple(r.index for r in recs if not r.converged)
    return ModuliChart(m=pert.m, epsilon=pert.epsilon, truncation=truncation,
                       grid=grid, perturbation=pert, records=recs,
                       partial=bool(failed), failed=failed)


def _solve_by_schedule(u, v, q, pert, truncation, cfg, steps):
    start = standard_half_line(u, v).pad_to(truncation)
    if pert.epsilon == 0.0 or steps <= 1:
        return newton_disk(start, pert, node_q=q, cfg=cfg)
    disk, info = start, None
    for s in range(1, steps + 1):
        stage = replace(pert, epsilon=pert.epsilon * s / steps)
        disk, info = newton_disk(disk, stage, node_q=q, cfg=cfg)
    return disk, info


# ---------------------------------------------------------------------------
# unperturbed verification


@dataclass(frozen=True)
class UnperturbedDiagnostics:
    max_halfline_distance: float
    max_quadric_residual: float
    injective: bool
    min_center_separation: float
    per_node: tuple                 # (index, halfline distance, quadric resid)


def verify_unperturbed(chart: ModuliChart) -> UnperturbedDiagnostics:
    """Check an amplitude-zero chart against the exact half-line family.

    Every stored solution must match its node's half-line up to the
    projective lift, every center must sit on the diagnostic quadric, and
    the center (incidence) map must separate grid nodes.
    """
    if chart.epsilon != 0.0:
        raise ConfigError("verification applies to amplitude-zero charts")
    rows = []
    centers = []
    for rec in chart.records:
        if not rec.converged:
            raise ConvergenceError(f"node {rec.label} did not converge")
        exact = standard_half_line(rec.u, rec.v).pad_to(rec.disk.degree)
        dist = rec.disk.projective_distance(exact)
        c = rec.quadric_point
        quad = abs(AmbientModel.quadric(c))
        rows.append((rec.index, dist, quad))
        centers.append(c)
    centers = np.array(centers)
    gram = np.abs(centers @ np.conj(centers.T)) ** 2
    norms = np.real(np.einsum("ij,ij->i", centers, np.conj(centers)))
    chordal = 1.0 - gram / np.outer(norms, norms)
    np.fill_diagonal(chordal, 1.0)
    min_sep = float(np.sqrt(max(np.min(chordal), 0.0)))
    return UnperturbedDiagnostics(
        max_halfline_distance=float(max(r[1] for r in rows)),
        max_quadric_residual=float(max(r[2] for r in rows)),
        injective=bool(min_sep > 1e-6),
        min_center_separation=min_sep,
        per_node=tuple(rows))


# ---------------------------------------------------------------------------
# incidence families


def projective_distance_points(w: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Chordal distance of projective points (last axis homogeneous)."""
    wn = np.linalg.norm(w, axis=-1)
    yn = np.linalg.norm(y)
    inner = np.abs(w @ np.conj(y)) / (wn * yn)
    return np.sqrt(np.maximum(1.0 - inner ** 2, 0.0))


@dataclass(frozen=True)
class IncidenceMember:
    node_index: int
    label: tuple
    theta: float
    disk: DiskMap
    center: np.ndarray
    incidence_residual: float


@dataclass(frozen=True)
class IncidenceFamily:
    point: np.ndarray               # ambient homogeneous coordinates of y
    sphere_point: np.ndarray        # its sphere preimage x_y
    members: tuple
    order_coordinates: tuple        # per member, coordinates used for ordering


def incidence_family(x_y: np.ndarray, chart: ModuliChart,
                     coarse_tol: float | None = None,
                     cfg: NewtonConfig = NewtonConfig(),
                     refine_tol: float | None = None,
                     drift_tol: float | None = None) -> IncidenceFamily:
    """Disks of the chart through the submanifold point over ``x_y``.

    Coarse selection keeps nodes whose boundary approaches the point below
    a threshold on the grid scale; each is refined by a constrained solve
    with the interpolation row ``f(e^{i theta_y}) = y`` added and the node
    anchors released (minimum-norm steps move the disk along the single
    moduli direction needed).  Refinements that drift further than a node
    spacing from their start are rejected as branch jumps.
    """
    x_y = np.asarray(x_y, dtype=float)
    x_y = x_y / np.linalg.norm(x_y)
    y = chart.perturbation.embed(x_y)
    spacing = np.pi / max(chart.grid.shape)
    if coarse_tol is None:
        coarse_tol = 0.8 * spacing
    if drift_tol is None:
        drift_tol = 1.5 * spacing
    refine_tol = refine_tol or cfg.tol

    thetas = 2.0 * np.pi * np.arange(256) / 256
    members = []
    for rec in chart.converged_records():
        bv = rec.disk.boundary_values(thetas)
        d = projective_distance_points(bv, y)
        imin = int(np.argmin(d))
        if d[imin] > coarse_tol:
            continue
        refined = _refine_member(rec, float(thetas[imin]), x_y,
                                 chart.perturbation, cfg, refine_tol)
        if refined is not None \
                and refined.disk.projective_distance(rec.disk) <= drift_tol:
            members.append(refined)

    if not members:
        raise ConvergenceError("incidence family is empty; the grid is too "
                               "coarse for this query point")
    ordered, coords = _order_members(members, x_y, chart.m)
    return IncidenceFamily(point=y, sphere_point=x_y, members=tuple(ordered),
                           order_coordinates=tuple(coords))


def _refine_member(rec: NodeRecord, theta0: float, x_y: np.ndarray,
                   pert: PerturbationSpec, cfg: NewtonConfig,
                   tol: float):
    disk = rec.disk
    n, kk = disk.n_components, disk.degree
    t = max(48, 4 * kk + 16)
    thetas = 2.0 * np.pi * np.arange(t) / t
    powers = np.exp(1j * np.outer(thetas, np.arange(kk + 1)))
    lin_mat, lin_tgt, _ = _linear_rows(disk, rec.u + 1j * rec.v,
                                       include_anchors=False)

    coeffs = disk.coeffs.copy()
    theta = theta0
    state = _init_state(powers @ coeffs.T)
    sign = None

    def incidence_rows(cf, th, sgn):
        w = cf @ np.exp(1j * th * np.arange(kk + 1))
        st = _init_state(w[None, :])
        x, _, _ = _straighten(w[None, :], pert, st, cfg)
        x = x[0]
        if sgn is None:
            sgn = 1.0 if float(x @ x_y) >= 0 else -1.0
        return x - sgn * x_y, sgn

    for it in range(cfg.max_iter + 1):
        r_bnd, _, state = _boundary_block(coeffs, powers, pert, state, cfg)
        r_lin = lin_mat @ _flatten(coeffs) - lin_tgt
        r_inc, sign = incidence_rows(coeffs, theta, sign)
        res = max(np.max(np.abs(r_bnd)), np.max(np.abs(r_lin)),
                  np.max(np.abs(r_inc)))
        if res < tol:
            break
        if it == cfg.max_iter:
            return None

        j_bnd = _fd_jacobian(coeffs, powers, pert, state, cfg, r_bnd)
        x0 = _flatten(coeffs)
        h = cfg.fd_step
        j_inc = np.zeros((r_inc.shape[0], x0.shape[0] + 1))
        for i in range(x0.shape[0]):
            xp = x0.copy(); xp[i] += h
            rp, _ = incidence_rows(_unflatten(xp, n, kk), theta, sign)
            xm = x0.copy(); xm[i] -= h
            rm, _ = incidence_rows(_unflatten(xm, n, kk), theta, sign)
            j_inc[:, i] = (rp - rm) / (2 * h)
        rp, _ = incidence_rows(coeffs, theta + h, sign)
        rm, _ = incidence_rows(coeffs, theta - h, sign)
        j_inc[:, -1] = (rp - rm) / (2 * h)

        jac = np.zeros((j_bnd.shape[0] + lin_mat.shape[0] + j_inc.shape[0],
                        x0.shape[0] + 1))
        jac[: j_bnd.shape[0], :-1] = j_bnd
        jac[j_bnd.shape[0]: j_bnd.shape[0] + lin_mat.shape[0], :-1] = lin_mat
        jac[j_bnd.shape[0] + lin_mat.shape[0]:, :] = j_inc
        rhs = np.concatenate([r_bnd, r_lin, r_inc])
        step, _ = _systems.min_norm_lstsq(jac, -rhs, rcond=cfg.pinv_rcond)
        coeffs = _unflatten(x0 + step[:-1], n, kk)
        theta = float(theta + step[-1])

    refined = DiskMap(coeffs=coeffs, chart=disk.chart, gauge=disk.gauge)
    r_inc, _ = incidence_rows(coeffs, theta, sign)
    center = refined.center()
    return IncidenceMember(node_index=rec.index, label=rec.label,
                           theta=theta % (2.0 * np.pi), disk=refined,
                           center=center / np.linalg.norm(center),
                           incidence_residual=float(np.max(np.abs(r_inc))))


def member_plane_normal(member: IncidenceMember,
                        pert: PerturbationSpec,
                        cfg: NewtonConfig = NewtonConfig(),
                        samples: int = 64) -> np.ndarray:
    """Oriented normal of the straightened boundary circle (m = 1 only)."""
    thetas = 2.0 * np.pi * np.arange(samples) / samples
    w = member.disk.boundary_values(thetas)
    x, _, _ = _straighten(w, pert, _init_state(w), cfg)
    circ = np.zeros(3)
    for t in range(samples):
        circ += np.cross(x[t], x[(t + 1) % samples])
    return circ / np.linalg.norm(circ)


def _order_members(members, x_y, m):
    if m == 1:
        # great-circle-like curve: order by angle in the plane normal to x_y
        basis = np.linalg.svd(x_y[None, :])[2][1:]
        coords, angles = [], []
        for mem in members:
            n = _center_normal_m1(mem)
            a = float(np.arctan2(n @ basis[1], n @ basis[0]))
            angles.append(a)
            coords.append((a, *n))
        idx = np.argsort(angles)
        return [members[i] for i in idx], [coords[i] for i in idx]
    coords = [(float(i),) + tuple(np.real(mem.center)) for i, mem in
              enumerate(members)]
    return list(members), coords


def _center_normal_m1(member: IncidenceMember) -> np.ndarray:
    """Unit normal of the plane of a disk in the three-component model.

    The span and orientation of (Re c, Im c) for a center c near the
    quadric are independent of the projective phase of the lift, so the
    normal is just their cross product after orthonormalizing.
    """
    c = member.center
    u = np.real(c)
    u = u / np.linalg.norm(u)
    v = np.imag(c)
    v = v - (v @ u) * u
    v = v / np.linalg.norm(v)
    n = np.cross(u, v)
    return n / np.linalg.norm(n)
