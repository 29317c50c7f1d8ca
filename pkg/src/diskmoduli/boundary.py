"""Totally real boundary conditions and their splitting invariants.

A maximal totally real boundary condition along the circle is either given
by a frame loop B (the fiber is ``E(theta) = B(theta) R^n``) or directly by
the conjugation loop ``G = B conj(B)^{-1}``, which satisfies
``G conj(G) = I`` and encodes the condition as the reflection relation
``f = G conj(f)`` on boundary traces.  This module computes the Maslov
index (winding of det G), the partial indices via a kernel-dimension scan
over twists, the classical scalar Birkhoff factorization as an independent
route, and the regularity / dimension bookkeeping derived from them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _systems
from .config import DEFAULT_TOLS, Tolerances
from .errors import TotallyRealViolation, TruncationError
from .spectral import (FourierLoop, TaylorDisk, hardy_project,
                       loop_from_samples, loop_product, sample_angles,
                       winding_number)

__all__ = [
    "BoundaryFrame",
    "GLoop",
    "PartialIndexReport",
    "frame_to_gloop",
    "maslov_index",
    "partial_indices",
    "birkhoff_scalar",
    "is_fredholm_regular",
]


# ---------------------------------------------------------------------------
# condition types


@dataclass(frozen=True)
class BoundaryFrame:
    """Invertible matrix loop B framing the totally real fibers B(theta) R^n."""

    loop: FourierLoop

    def __post_init__(self):
        if not self.loop.is_matrix:
            object.__setattr__(self, "loop", FourierLoop(
                self.loop.coeffs[:, np.newaxis, np.newaxis]))

    @property
    def dim(self) -> int:
        return self.loop.dim

    def validate(self, tols: Tolerances = DEFAULT_TOLS, samples: int = 512) -> float:
        """Smallest singular value over the sample grid; raises if degenerate."""
        vals = self.loop.evaluate(sample_angles(samples))
        sv = np.linalg.svd(vals, compute_uv=False)
        smin = float(np.min(sv))
        if smin <= tols.frame_min_sv:
            raise TotallyRealViolation(
                f"frame singular value {smin:.3e} <= {tols.frame_min_sv:.1e}; "
                "the fibers are not maximal totally real")
        return smin


@dataclass(frozen=True)
class GLoop:
    """Conjugation-symmetry loop with G(theta) conj(G(theta)) = I."""

    loop: FourierLoop

    def __post_init__(self):
        if not self.loop.is_matrix:
            object.__setattr__(self, "loop", FourierLoop(
                self.loop.coeffs[:, np.newaxis, np.newaxis]))

    @property
    def dim(self) -> int:
        return self.loop.dim

    @property
    def order(self) -> int:
        return self.loop.order

    def validate(self, tols: Tolerances = DEFAULT_TOLS, samples: int = 512) -> float:
        """Max defect of G conj(G) = I and |det G| = 1 on a sample grid."""
        vals = self.loop.evaluate(sample_angles(samples))
        eye = np.eye(self.dim)
        defect = np.einsum("tij,tjk->tik", vals, np.conj(vals)) - eye
        worst = float(np.max(np.abs(defect)))
        dets = np.abs(np.linalg.det(vals))
        worst = max(worst, float(np.max(np.abs(dets - 1.0))))
        if worst > tols.gloop_tol:
            raise TotallyRealViolation(
                f"G conj(G) = I violated by {worst:.3e} (tol {tols.gloop_tol:.1e})")
        return worst

    @staticmethod
    def scalar_exponential(k: int) -> "GLoop":
        return GLoop(FourierLoop.exponential(k, n=1))

    @staticmethod
    def diagonal_exponentials(ks) -> "GLoop":
        """diag(e^{i k_1 theta}, ..., e^{i k_n theta})."""
        ks = list(ks)
        n = len(ks)
        kk = max(abs(k) for k in ks) if ks else 0
        coeffs = np.zeros((2 * kk + 1, n, n), dtype=complex)
        for i, k in enumerate(ks):
            coeffs[k + kk, i, i] = 1.0
        return GLoop(FourierLoop(coeffs))


def as_gloop(condition, tols: Tolerances = DEFAULT_TOLS) -> GLoop:
    """Accept a GLoop, BoundaryFrame or bare FourierLoop as a condition."""
    if isinstance(condition, GLoop):
        condition.validate(tols)
        return condition
    if isinstance(condition, BoundaryFrame):
        return frame_to_gloop(condition, tols=tols)
    if isinstance(condition, FourierLoop):
        g = GLoop(condition)
        g.validate(tols)
        return g
    raise TypeError(f"not a boundary condition: {type(condition)!r}")


def frame_to_gloop(frame: BoundaryFrame, tols: Tolerances = DEFAULT_TOLS,
                   samples: int | None = None) -> GLoop:
    """Clutching loop ``G = B conj(B)^{-1}`` of a frame.

    Computed pointwise on a dense grid and transformed back; the result is
    exact for the sampled values and carries the full sample bandwidth
    (the inverse of a trig-polynomial frame is not band-limited).
    """
    frame.validate(tols)
    if samples is None:
        samples = max(256, 8 * (frame.loop.order + 1))
    vals = frame.loop.evaluate(sample_angles(samples))
    g_vals = np.einsum("tij,tjk->tik", vals,
                       np.linalg.inv(np.conj(vals)))
    g = GLoop(loop_from_samples(g_vals).trim(tols.loop_tail_tol * 1e-2))
    g.validate(tols)
    return g


# ---------------------------------------------------------------------------
# indices


@dataclass(frozen=True)
class PartialIndexReport:
    """Splitting data of the doubled bundle attached to a boundary condition."""

    indices: tuple          # sorted partial indices, with multiplicity
    maslov: int
    regular: bool
    h0: int
    h1: int
    scan: tuple = field(default=())   # rows (m, N(m), "computed"|"extrapolated")
    truncation: int = 0
    scan_truncation: int = 0
    rank_tol: float = 0.0

    def second_differences(self) -> list[tuple[int, int]]:
        table = {m: nm for m, nm, _ in self.scan}
        out = []
        for m, _, _ in self.scan:
            if m + 1 in table and m + 2 in table:
                out.append((m, table[m] - 2 * table[m + 1] + table[m + 2]))
        return out


def maslov_index(g: GLoop, tols: Tolerances = DEFAULT_TOLS) -> int:
    """Winding number of det G; the degree of the doubled bundle."""
    if g.dim == 1:
        det = lambda t: g.loop.evaluate(t)[..., 0, 0]
    else:
        det = lambda t: np.linalg.det(g.loop.evaluate(t))
    return winding_number(det, samples=tols.winding_samples,
                          min_modulus=tols.winding_min_modulus)


def _kernel_dim(g: GLoop, k_max: int, twist: int, rank_tol: float) -> int:
    return _systems.nullity(_systems.twisted_system(g.loop, k_max, twist),
                            rank_tol)


def _scan_indices(g: GLoop, k_scan: int, mu: int, rank_tol: float):
    """Kernel-dimension scan; returns (indices, table rows) or None.

    Walks outward from ``round(mu/n)`` until the table is certified
    saturated on both sides: on the left N(m) hits the affine lower bound
    ``mu - n m + n`` exactly (which happens iff every index is >= m - 1),
    on the right N(m) hits zero (iff every index is <= m - 1).  Both
    certificates are exact because the truncated system has no spurious
    kernel; failure to certify inside the truncation-safe window means the
    scan needs a larger truncation and returns None.
    """
    n = g.dim
    table: dict[int, int] = {}

    def measure(m: int) -> int:
        if m not in table:
            table[m] = _kernel_dim(g, k_scan, m, rank_tol)
        return table[m]

    center = int(np.rint(mu / n))
    width_limit = k_scan - 2

    m_lo = center
    while True:
        if measure(m_lo) == mu - n * m_lo + n:
            break
        m_lo -= 1
        if center - m_lo > width_limit:
            return None
    m_hi = center
    while True:
        if measure(m_hi) == 0:
            break
        m_hi += 1
        if m_hi - center > width_limit:
            return None
    if m_hi - m_lo > width_limit:
        return None

    # saturated continuations, no further solves needed
    full = {m: table.get(m, None) for m in range(m_lo - 1, m_hi + 2)}
    full[m_lo - 1] = mu - n * (m_lo - 1) + n
    full[m_hi + 1] = 0
    for m in range(m_lo, m_hi + 1):
        if full[m] is None:
            full[m] = measure(m)

    indices: list[int] = []
    for v in range(m_lo - 1, m_hi):
        mult = full[v] - 2 * full[v + 1] + full[v + 2]
        if mult < 0:
            return None
        indices.extend([v] * mult)
    if len(indices) != n or sum(indices) != mu:
        return None
    for m in range(m_lo, m_hi + 1):
        if full[m] != sum(max(j - m + 1, 0) for j in indices):
            return None

    rows = [(m, table[m], "computed") for m in sorted(table)]
    rows.append((m_lo - 1, full[m_lo - 1], "extrapolated"))
    rows.append((m_hi + 1, 0, "extrapolated"))
    rows.sort()
    return sorted(indices), rows


def partial_indices(condition, k: int = 64, rank_tol: float | None = None,
                    tols: Tolerances = DEFAULT_TOLS) -> PartialIndexReport:
    """Partial indices of a boundary condition by kernel-dimension scan.

    For each twist m the real dimension ``N(m)`` of the solutions of
    ``f = e^{-i m theta} G conj(f)`` is measured by an SVD rank decision on
    the truncated Taylor-coefficient system; the multiset of indices is
    recovered from the second differences of the table and cross-checked
    against the Maslov index.

    The scan first runs at a small internal truncation (the solutions it
    must see have degree on the order of the index spread, not of ``k``)
    and escalates to the full ``k`` whenever any consistency check fails.
    """
    g = as_gloop(condition, tols)
    tau = tols.rank_tol if rank_tol is None else rank_tol
    n = g.dim
    mu = maslov_index(g, tols)

    k_small = min(k, max(12, 2 * (abs(int(np.rint(mu / n)))) + 2 * n + 8))
    attempts = [k_small, k] if k_small < k else [k]
    result = None
    used = attempts[-1]
    for k_scan in attempts:
        result = _scan_indices(g, k_scan, mu, tau)
        if result is not None:
            used = k_scan
            break
    if result is None:
        raise TruncationError(
            f"index scan failed to reconstruct {n} indices at truncation {k}; "
            "the condition needs a larger truncation or is invalid")

    indices, rows = result
    h0 = sum(max(j + 1, 0) for j in indices)
    h1 = sum(max(-j - 1, 0) for j in indices)
    return PartialIndexReport(indices=tuple(indices), maslov=mu,
                              regular=(min(indices) >= -1), h0=h0, h1=h1,
                              scan=tuple(rows), truncation=k,
                              scan_truncation=used, rank_tol=tau)


def is_fredholm_regular(report: PartialIndexReport) -> bool:
    """All partial indices >= -1, equivalently h1 = 0."""
    return min(report.indices) >= -1


# ---------------------------------------------------------------------------
# scalar Birkhoff factorization


def birkhoff_scalar(g: GLoop | FourierLoop, samples: int = 4096,
                    tols: Tolerances = DEFAULT_TOLS):
    """Classical factorization ``G = Theta_+ e^{i j theta} Theta_-``.

    Only for scalar nonvanishing loops.  The winding j is removed, a
    continuous logarithm is tracked around the circle, split by Hardy
    projection and exponentiated; ``Theta_+`` extends holomorphically into
    the disk and ``Theta_-`` outside it.  Returns ``(j, theta_plus,
    theta_minus)`` as loops.
    """
    loop = g.loop if isinstance(g, GLoop) else g
    if not (loop.is_scalar or loop.dim == 1):
        raise ValueError("scalar factorization needs a scalar loop")
    flat = FourierLoop(loop.coeffs.reshape(loop.coeffs.shape[0]))
    j = winding_number(flat, samples=samples,
                       min_modulus=tols.winding_min_modulus)

    thetas = sample_angles(samples)
    vals = flat.evaluate(thetas) * np.exp(-1j * j * thetas)
    incr = np.angle(np.roll(vals, -1) / vals)
    if np.max(np.abs(incr)) > 0.9 * np.pi:
        raise TruncationError("argument jump near pi; log branch tracking failed")
    args = np.concatenate([[np.angle(vals[0])],
                           np.angle(vals[0]) + np.cumsum(incr[:-1])])
    h = loop_from_samples(np.log(np.abs(vals)) + 1j * args)
    h_plus = hardy_project(h, "nonnegative")
    h_minus = hardy_project(h, "negative")
    theta_plus = loop_from_samples(np.exp(h_plus.evaluate(thetas)))
    theta_minus = loop_from_samples(np.exp(h_minus.evaluate(thetas)))
    return j, theta_plus, theta_minus
