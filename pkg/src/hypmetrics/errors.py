"""Exception types shared across the package."""


class HypmetricsError(Exception):
    """Base class for all package errors."""


class DomainError(HypmetricsError):
    """A point is outside the domain, on its boundary, or dimensionally incompatible."""


class DegenerateAngle(HypmetricsError):
    """Angle vertex coincides with one of the outer points."""


class DegenerateInput(HypmetricsError):
    """Two points that must be distinct coincide."""


class MissingWindow(HypmetricsError):
    """An unbounded boundary was sampled without a finite window."""


class RangeError(HypmetricsError):
    """A radius or parameter lies outside its valid range."""


class UnsupportedMetric(HypmetricsError):
    """The requested metric kind is not valid for this operation."""


class UnboundedBall(HypmetricsError):
    """A ball trace with truncated rays was passed where a closed loop is required."""


class ParseError(HypmetricsError):
    """Malformed command-line or file input."""
