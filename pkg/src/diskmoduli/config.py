"""Shared numerical defaults.

Every tolerance used by the library lives here so that reports can record
exactly which cutoffs produced them, and so the CLI can override them in one
place.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace


@dataclass(frozen=True)
class Tolerances:
    # relative SVD cutoff used for every rank / kernel-dimension decision
    rank_tol: float = 1e-8
    # least-squares boundary residual below which a BVP counts as solved
    residual_tol: float = 1e-8
    # normalized residual above which a BVP is declared obstructed
    obstructed_tol: float = 1e-6
    # pointwise defect allowed in G * conj(G) = I and |det G| = 1
    gloop_tol: float = 1e-8
    # smallest singular value of a frame B before it stops being totally real
    frame_min_sv: float = 1e-8
    # winding numbers: sample count and modulus floor on the sample grid
    winding_samples: int = 4096
    winding_min_modulus: float = 1e-8
    # relative tail mass allowed when truncating a sampled loop
    loop_tail_tol: float = 1e-10
    # relative misfit allowed by the radial fit inside the Cauchy transform
    cp_fit_tol: float = 1e-7

    def replaced(self, **kw) -> "Tolerances":
        return replace(self, **kw)


DEFAULT_TOLS = Tolerances()


@dataclass(frozen=True)
class NewtonConfig:
    """Settings for the nonlinear disk solver."""

    tol: float = 1e-8            # sup-norm of the boundary defect at convergence
    max_iter: int = 25
    fd_step: float = 1e-6        # central-difference step for the Jacobian
    # gauge directions are exact zeros lifted to ~1e-9 by Jacobian noise;
    # the cutoff must sit well above that and below the physical spectrum
    pinv_rcond: float = 1e-6
    tangent_rank_tol: float = 1e-6
    inner_max_iter: int = 30     # per-angle straightening solves
    inner_tol: float = 1e-13
