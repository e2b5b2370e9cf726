"""Exception types raised by the library."""


class EmptyInput(ValueError):
    """A measure or function was built from no data."""


class NonPositiveWeight(ValueError):
    """An atom weight was zero or negative."""


class InvalidP(ValueError):
    """The requested norm order p is outside the supported range."""


class BarycenterMismatch(ValueError):
    """An operation that requires equal barycenters was given measures whose means differ."""


class MassMismatch(ValueError):
    """A potential function does not carry total mass one (slope changes must sum to 2)."""


class NoConvergence(RuntimeError):
    """An iterative solver hit its iteration cap before reaching the requested tolerance."""


class MalformedRecord(ValueError):
    """A measure record is structurally invalid (missing or badly typed fields)."""
