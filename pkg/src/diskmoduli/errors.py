"""Exception types shared across the package."""


class DiskModuliError(Exception):
    """Base class for all library-specific failures."""


class TotallyRealViolation(DiskModuliError):
    """A boundary condition fails the maximal totally real test."""


class TruncationError(DiskModuliError):
    """A truncation order is too small for the requested computation."""


class GridResolutionError(DiskModuliError):
    """A quadrature grid cannot represent the supplied data."""


class ConvergenceError(DiskModuliError):
    """An iterative solve did not reach its tolerance."""


class ConfigError(DiskModuliError):
    """Bad user-supplied configuration or input document."""
