"""Numerics for holomorphic disks with totally real boundary conditions.

The package computes Fredholm-regularity data of such disks (Maslov index,
partial indices, kernel and cokernel dimensions through the doubled-bundle
picture), solves the associated linear dbar boundary value problems, does
the dimension bookkeeping for real plane curves, and runs Newton
continuation of the disk families bounding on perturbations of real
projective space inside complex projective space.
"""

from .config import DEFAULT_TOLS, NewtonConfig, Tolerances
from .errors import (ConfigError, ConvergenceError, DiskModuliError,
                     GridResolutionError, TotallyRealViolation, TruncationError)
from .spectral import (DiskGrid, FourierLoop, ParticularSolution, RHSForm,
                       TaylorDisk, cauchy_pompeiu, eval_disk, hardy_project,
                       loop_from_function, loop_from_samples, loop_product,
                       winding_number)

__version__ = "0.1.0"
