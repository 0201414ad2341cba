"""Exception hierarchy.

Every error raised on a bad argument derives from :class:`PilotReuseError`,
which is itself a :class:`ValueError` so callers that only care about
"bad input" can catch that.
"""


class PilotReuseError(ValueError):
    pass


class InvalidOrderError(PilotReuseError):
    """Partition order m < 2 (fewer than 9 cells)."""


class InvalidParameterError(PilotReuseError):
    pass


class DepthError(PilotReuseError):
    """Partition depth outside 0..m-1."""


class DegenerateGeometryError(PilotReuseError):
    """A user sits exactly on a base station."""


class MonopolyError(PilotReuseError):
    """A pilot is used by a single cell, so the asymptotic rate is unbounded."""


class InvalidLengthError(PilotReuseError):
    """Pilot length outside {K, K+2, ..., LK/3}."""


class ShapeError(PilotReuseError):
    pass


class DomainError(PilotReuseError):
    pass


class SearchSizeError(PilotReuseError):
    """Brute-force instance larger than the tractability guard."""


class GroupMismatchError(PilotReuseError, TypeError):
    """A vector built for one (K, L) is used in a context expecting another."""


class FeasibilityWarning(UserWarning):
    """Coherence time too short for any pilot assignment to carry data."""
