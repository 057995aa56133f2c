"""Exception hierarchy shared across the package."""


class WassSmoothError(Exception):
    """Base class for all package errors."""


class DomainError(WassSmoothError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class DimensionMismatch(WassSmoothError, ValueError):
    """Measures or vectors live on incompatible spaces."""


class InvalidHypothesis(WassSmoothError):
    """A theorem hypothesis (parameter range, positivity, ...) is violated."""


class InsufficientWindow(WassSmoothError):
    """The spectral table does not cover the window the bound requires."""


class TailCertificateMissing(WassSmoothError):
    """The table's tail certificate does not apply to the requested parameters."""


class ResourceLimit(WassSmoothError):
    """A configured size cap (lattice points, degrees, LP cells) was exceeded."""


class MissingConstants(WassSmoothError):
    """A manifold bound needs constants that were not supplied."""


class NotADesign(WassSmoothError):
    """The point set fails the design residual test at the requested strength."""


class WeightGridError(WassSmoothError):
    """Weights are not representable on a common integer grid."""


class CertificateError(WassSmoothError):
    """An exact solver produced a solution that fails its own certificate."""


class NoValidPoint(WassSmoothError):
    """Every candidate in an optimization range violates the hypotheses."""
