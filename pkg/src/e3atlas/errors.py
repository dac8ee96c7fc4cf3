"""Exception types shared across the package."""


class AtlasError(Exception):
    """Base class for all errors raised by this package."""


class ZeroVectorError(AtlasError):
    """Every amplitude of a would-be state vector is numerically zero."""


class DegreeTooLargeError(AtlasError):
    """Polynomial invariant degree beyond the supported maximum (n > 6)."""


class NegativeI5Error(AtlasError):
    """The squared hyperdeterminant modulus came out below -1e-12."""


class NotNormalizedError(AtlasError):
    """A standard-form state deviates from unit norm beyond tolerance."""


class NotInOrbitSpaceError(AtlasError):
    """An invariant vector fails the orbit-space membership conditions."""

    def __init__(self, message, violated=(), report=None):
        super().__init__(message)
        self.violated = tuple(violated)
        self.report = report


class ConsistencyError(AtlasError):
    """Internal numerical consistency failure; indicates a defect, not bad input."""


class UnclassifiableError(ConsistencyError):
    """No cell of the classification tree matched a member vector."""


class NegativeProductError(AtlasError):
    """beta1*beta2*beta3 is negative beyond the floating-point guard."""


class OutOfRangeError(AtlasError):
    """A scalar argument lies outside its admissible interval."""


class DegenerateFiberError(AtlasError):
    """The feasible beta5 interval of a fiber has (numerically) zero length."""


class EmptyGeometryError(AtlasError):
    """Mesh export was asked to serialize an empty point set."""
