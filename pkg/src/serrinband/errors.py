"""Exception types shared across the library."""


class SerrinbandError(Exception):
    """Base class for all library errors."""


class DomainError(SerrinbandError):
    """An argument lies outside the mathematical domain of an operation."""


class ResolutionError(SerrinbandError):
    """A grid is too coarse to resolve the requested spectral content."""


class SeriesError(SerrinbandError):
    """A power-series evaluation could not meet its truncation tolerance."""


class AdmissibilityError(SerrinbandError):
    """A boundary profile leaves the admissible band 0 < phi < pi/2."""


class SolverError(SerrinbandError):
    """A linear or nonlinear solve failed; message carries diagnostics."""
