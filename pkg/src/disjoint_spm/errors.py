"""Exception types shared across the package."""


class BoundsError(ValueError):
    """A size or edge-count argument is outside its domain."""


class FeasibilityError(RuntimeError):
    """The request is valid but too large without an explicit opt-in."""


class ValidationError(ValueError):
    """Input data does not satisfy a structural invariant."""


class IncomparableError(ValueError):
    """Two objects of different side size were compared."""


class VerificationError(RuntimeError):
    """Two independent computations that must agree did not."""


class SamplingError(RuntimeError):
    """A randomized search ran out of budget."""
