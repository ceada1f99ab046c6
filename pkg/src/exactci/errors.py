"""Exception types shared across the package."""


class ExactCIError(ValueError):
    """Base class for all errors raised by this package."""


class NotLogConcave(ExactCIError):
    """Weight sequence is not strictly log-concave at some interior point."""

    def __init__(self, x: int):
        self.x = x
        super().__init__(f"weights are not strictly log-concave at x = {x}")


class OutOfSupport(ExactCIError):
    """An outcome or index lies outside the family's support."""


class InadmissibleInfiniteTheta(ExactCIError):
    """theta = +/-inf requested although the matching support endpoint is infinite."""


class KEqualsX(ExactCIError):
    """The special parameter theta_{k,x} is undefined for k = x."""


class BadAlpha(ExactCIError):
    """Level alpha must satisfy 0 < alpha < 1."""


class BadDelta(ExactCIError):
    """Precision delta must be a finite positive number."""


class BadN(ExactCIError):
    """Sample-size parameter must be a positive integer."""


class BadGrid(ExactCIError):
    """A parameter grid or curve range is malformed."""


class EmptySupport(ExactCIError):
    """Support is empty, or has fewer than two points."""


class DivergentSearch(ExactCIError):
    """A doubling search exceeded its cap; the family violates the tail condition."""


class UnboundedEnumeration(ExactCIError):
    """An operation would need to enumerate an unreasonably large support window."""
