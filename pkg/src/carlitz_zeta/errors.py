class CarlitzError(ValueError):
    """Base class for domain errors raised by this package."""


class IndeterminateValuation(CarlitzError):
    """An element is zero to its known precision where a unit was needed."""


class NotAQthPower(CarlitzError):
    """q-th root requested of a series whose support is not divisible by q."""


class ReduciblePolynomial(CarlitzError):
    pass


class NoUnramifiedSolution(CarlitzError):
    pass


class OutsideDisk(CarlitzError):
    """Argument lies outside the disk where a power series converges."""


class DepthExceeded(CarlitzError):
    """A zeta argument needs a polylogarithm deeper than the ones built."""
