"""Exception types shared across the package.

Each class carries an ``exit_code`` used by the command line driver:
3 for rejected input, 2 for systems without normalizable states, and
4 for numerical failures detected mid-computation.
"""


class LinsysQuantaError(Exception):
    """Base class for all package errors."""

    exit_code = 4


class NonSymmetricInput(LinsysQuantaError):
    """A matrix that must be symmetric is not, beyond tolerance."""

    exit_code = 3


class NotPositiveDefinite(LinsysQuantaError):
    """A matrix that must be positive definite has a non-positive eigenvalue."""

    exit_code = 3


class OrderTooLarge(LinsysQuantaError):
    """Requested polynomial order exceeds the supported cap."""

    exit_code = 3


class TruncationTooLarge(LinsysQuantaError):
    """Requested expansion truncation exceeds the supported cap."""

    exit_code = 3


class GridMismatch(LinsysQuantaError):
    """Field shapes do not match the grid they are paired with."""

    exit_code = 3


class NoPhysicalState(LinsysQuantaError):
    """No mode selection yields a normalizable stationary Gaussian state."""

    exit_code = 2


class DefectiveSpectrum(LinsysQuantaError):
    """The stability matrix has fewer eigenvectors than its dimension."""


class DegenerateUnresolved(LinsysQuantaError):
    """Eigenmode bookkeeping failed (pairing or branch classification)."""


class ComplexFrequency(LinsysQuantaError):
    """An operation requiring real mode frequencies met a complex one."""


class SingularModeBasis(LinsysQuantaError):
    """The mode amplitude basis is numerically singular."""


class SignalDomainExceeded(LinsysQuantaError):
    """A sampled time signal was evaluated outside its sample range."""


class BlowUp(LinsysQuantaError):
    """An integrated quantity left the trusted numerical range."""


class SingularD(LinsysQuantaError):
    """The denominator matrix of the shape-parameter quotient is singular."""


class RelationViolation(LinsysQuantaError):
    """A consistency relation between mode data and the shape matrix failed."""


class SingularBasis(LinsysQuantaError):
    """The conjugate-amplitude basis does not span coordinate space."""


class FormMismatch(LinsysQuantaError):
    """Two supposedly equivalent evaluations of a state disagree."""
