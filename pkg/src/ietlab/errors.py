"""Exception hierarchy shared by all ietlab modules."""


class IETError(Exception):
    """Base class for every error raised by ietlab."""


class DomainError(IETError, ValueError):
    """A point or interval lies outside the domain of a map."""


class NoPreimageError(DomainError):
    """The requested point is not in the image of the map."""


class InvalidIETError(IETError, ValueError):
    """Raised when a piecewise translation fails its structural invariants."""


class CapExceeded(IETError):
    """A configured iteration, piece or lattice cap was reached."""


class RefinementOverflow(CapExceeded):
    """Partition refinement needed more pieces than allowed.

    This is how accumulation of discontinuities (for instance at the right
    endpoint of the domain of ``T_N``) is surfaced instead of looping.
    """


class ReturnTimeExceeded(CapExceeded):
    """Some point did not come back to the target within the step cap."""


class OracleTooLarge(CapExceeded):
    """The lattice oracle would have to enumerate too many points."""


class UndefinedSuccessor(IETError, ValueError):
    """The addition-by-one map is undefined at all-ones words/sequences."""


class NotInvariantError(IETError, ValueError):
    """An interval expected to be invariant is moved off itself."""
