"""Grids on the Grassmannian of oriented 2-planes.

A node is an ordered orthonormal pair (u, v) in R^(m+2); the oriented plane
is span(u, v) with orientation u wedge v.  For m = 1 the Grassmannian is the
sphere of unit normals; for m = 2 it is a product of two spheres through the
self-dual / anti-self-dual split of 2-forms on R^4.  Higher m uses a
product-of-angles parameterization of the pair (u, v) directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["GrassmannGrid", "plane_from_normal", "plane_from_sphere_pair",
           "sphere_point"]


def sphere_point(az: float, pol: float) -> np.ndarray:
    return np.array([np.cos(az) * np.sin(pol),
                     np.sin(az) * np.sin(pol),
                     np.cos(pol)])


def plane_from_normal(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Oriented basis (u, v) of the plane in R^3 with u x v = n."""
    n = np.asarray(n, dtype=float)
    n = n / np.linalg.norm(n)
    a = np.zeros(3)
    a[int(np.argmin(np.abs(n)))] = 1.0
    u = np.cross(a, n)
    u = u / np.linalg.norm(u)
    v = np.cross(n, u)
    return u, v


_SD_BASIS = None


def _selfdual_bases():
    """Orthogonal bases of the (anti)self-dual 2-forms on R^4, as skew maps."""
    global _SD_BASIS
    if _SD_BASIS is None:
        def wedge(i, j):
            m = np.zeros((4, 4))
            m[i, j] = 1.0
            m[j, i] = -1.0
            return m
        plus = [wedge(0, 1) + wedge(2, 3), wedge(0, 2) + wedge(3, 1),
                wedge(0, 3) + wedge(1, 2)]
        minus = [wedge(0, 1) - wedge(2, 3), wedge(0, 2) - wedge(3, 1),
                 wedge(0, 3) - wedge(1, 2)]
        _SD_BASIS = (plus, minus)
    return _SD_BASIS


def plane_from_sphere_pair(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Oriented 2-plane in R^4 from a point on each sphere factor.

    The decomposable unit 2-form is ``(a . sigma+ + b . sigma-)/2``; its skew
    matrix has the plane as image, and ``(p, -Omega p)`` is an oriented
    orthonormal basis for any unit p in the plane.
    """
    a = np.asarray(a, dtype=float) / np.linalg.norm(a)
    b = np.asarray(b, dtype=float) / np.linalg.norm(b)
    plus, minus = _selfdual_bases()
    omega = 0.5 * (sum(ai * pi for ai, pi in zip(a, plus))
                   + sum(bi * mi for bi, mi in zip(b, minus)))
    sym = omega.T @ omega
    w, vecs = np.linalg.eigh(sym)
    p = vecs[:, -1]
    u = p / np.linalg.norm(p)
    v = -omega @ u
    v = v / np.linalg.norm(v)
    return u, v


def _factor_shape(count: int) -> tuple[int, int]:
    pol = int(np.floor(np.sqrt(count)))
    while count % pol:
        pol -= 1
    return count // pol, pol          # (azimuth, polar)


@dataclass(frozen=True)
class GrassmannGrid:
    """Node set with lattice adjacency for warm-started sweeps."""

    m: int
    shape: tuple
    labels: tuple          # per node, a tuple of lattice indices
    planes: tuple          # per node, (u, v)

    @staticmethod
    def build(m: int, shape) -> "GrassmannGrid":
        if m == 1:
            n_az, n_pol = int(shape[0]), int(shape[1])
            labels, planes = [], []
            for i in range(n_az):
                for j in range(n_pol):
                    az = 2.0 * np.pi * i / n_az
                    pol = np.pi * (j + 0.5) / n_pol
                    u, v = plane_from_normal(sphere_point(az, pol))
                    labels.append((i, j))
                    planes.append((u, v))
            return GrassmannGrid(1, (n_az, n_pol), tuple(labels), tuple(planes))
        if m == 2:
            c1, c2 = int(shape[0]), int(shape[1])
            az1, pol1 = _factor_shape(c1)
            az2, pol2 = _factor_shape(c2)

            def factor_point(i, az_n, pol_n):
                ia, ip = divmod(i, pol_n)
                return sphere_point(2.0 * np.pi * ia / az_n,
                                    np.pi * (ip + 0.5) / pol_n)

            labels, planes = [], []
            for i in range(c1):
                for j in range(c2):
                    a = factor_point(i, az1, pol1)
                    b = factor_point(j, az2, pol2)
                    u, v = plane_from_sphere_pair(a, b)
                    labels.append((i, j))
                    planes.append((u, v))
            return GrassmannGrid(2, (c1, c2), tuple(labels), tuple(planes))
        raise NotImplementedError(
            "grids are provided for m = 1 and m = 2; pass explicit planes "
            "for higher m")

    @staticmethod
    def from_planes(m: int, planes) -> "GrassmannGrid":
        planes = tuple((np.asarray(u, float), np.asarray(v, float))
                       for u, v in planes)
        labels = tuple((i,) for i in range(len(planes)))
        return GrassmannGrid(m, (len(planes),), labels, planes)

    def __len__(self) -> int:
        return len(self.planes)

    def neighbors(self, idx: int) -> list[int]:
        """Lattice neighbors (azimuth axes wrap for m = 1)."""
        lab = self.labels[idx]
        index_of = {l: i for i, l in enumerate(self.labels)}
        out = []
        for axis in range(len(lab)):
            size = self.shape[axis]
            for d in (-1, 1):
                cand = list(lab)
                cand[axis] += d
                if self.m == 1 and axis == 0:
                    cand[axis] %= size
                if not (0 <= cand[axis] < size):
                    continue
                key = tuple(cand)
                if key in index_of:
                    out.append(index_of[key])
        return out

    def bfs_order(self, seed: int = 0) -> list[tuple[int, int | None]]:
        """Breadth-first sweep order as (node, warm-start parent) pairs."""
        seen = {seed}
        order = [(seed, None)]
        queue = [seed]
        while queue:
            cur = queue.pop(0)
            for nb in self.neighbors(cur):
                if nb not in seen:
                    seen.add(nb)
                    order.append((nb, cur))
                    queue.append(nb)
        for idx in range(len(self)):        # disconnected safety
            if idx not in seen:
                order.append((idx, None))
                seen.add(idx)
        return order
