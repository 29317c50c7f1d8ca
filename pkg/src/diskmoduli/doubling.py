"""Dimension bookkeeping on the doubled surface.

For a disk the double is the rational curve and the doubled bundle splits;
everything about it is determined by the partial indices.  For real plane
curves the double is either the curve itself (two-component real
complement) or its orientation double cover (connected complement), and
Serre duality kills h1 in both cases, so moduli dimensions follow from
Riemann-Roch alone.
"""

from __future__ import annotations

from dataclasses import dataclass

from .boundary import PartialIndexReport
from .errors import ConfigError

__all__ = [
    "DoubleReport",
    "PlaneCurveSpec",
    "PlaneCurveReport",
    "double_disk_bundle",
    "plane_curve_double",
    "riemann_roch_check",
]


@dataclass(frozen=True)
class DoubleReport:
    """Invariants of the doubled bundle attached to a disk condition."""

    genus: int
    splitting: tuple
    degree: int
    h0: int
    h1: int
    h0_rho: int     # real dimension of the invariant eigenspace, = h0
    h1_rho: int


def double_disk_bundle(report: PartialIndexReport) -> DoubleReport:
    """Double invariants of a disk boundary condition (genus zero)."""
    degree = sum(report.indices)
    h0 = sum(max(j + 1, 0) for j in report.indices)
    h1 = sum(max(-j - 1, 0) for j in report.indices)
    return DoubleReport(genus=0, splitting=tuple(sorted(report.indices)),
                        degree=degree, h0=h0, h1=h1, h0_rho=h0, h1_rho=h1)


@dataclass(frozen=True)
class PlaneCurveSpec:
    """Smooth real plane curve of degree d with nonempty real locus.

    ``components`` is the number of components of the complement of the
    real locus ("two" when the quotient by conjugation is orientable).
    """

    degree: int
    components: str     # "one" | "two"

    def __post_init__(self):
        if self.degree < 1:
            raise ConfigError(f"degree must be >= 1, got {self.degree}")
        if self.components not in ("one", "two"):
            raise ConfigError(f"components must be 'one' or 'two', "
                              f"got {self.components!r}")


@dataclass(frozen=True)
class PlaneCurveReport:
    genus_curve: int
    double: str                 # "curve itself" | "orientation double cover"
    genus_double: int
    deg_normal: int
    deg_canonical_minus_normal: int
    h0: int
    h1: int
    moduli_dim: int


def plane_curve_double(spec: PlaneCurveSpec) -> PlaneCurveReport:
    """Serre-duality dimension count for half-curves clinging to the real locus.

    Two-component case: the double is the curve itself, the relevant bundle
    is its normal bundle of degree d^2, and deg(K - N) = -3d < 0 gives
    h1 = 0 and moduli dimension d(d+3)/2.  Connected case: the double is the
    orientation double cover, every degree doubles, and the count is d(d+3).
    """
    d = spec.degree
    g = (d - 1) * (d - 2) // 2
    if spec.components == "two":
        g_double = g
        deg_n = d * d
        deg_kn = d * (d - 3) - deg_n        # = -3d
        double = "curve itself"
    else:
        # unramified double cover; for d <= 2 this is the virtual genus
        g_double = 2 * g - 1
        deg_n = 2 * d * d
        deg_kn = 2 * d * (d - 3) - deg_n    # = -6d
        double = "orientation double cover"
    h1 = 0                                   # deg(K - N) < 0 for every d >= 1
    h0 = deg_n - g_double + 1 + h1           # Riemann-Roch with h1 = 0
    return PlaneCurveReport(genus_curve=g, double=double,
                            genus_double=g_double, deg_normal=deg_n,
                            deg_canonical_minus_normal=deg_kn,
                            h0=h0, h1=h1, moduli_dim=h0)


def riemann_roch_check(genus: int, degree: int) -> int:
    """h0 - h1 of a line bundle of the given degree on a curve of that genus."""
    if genus < 0:
        raise ConfigError("genus must be nonnegative")
    return degree - genus + 1
