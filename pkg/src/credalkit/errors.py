"""Exception hierarchy shared by every credalkit module."""


class CredalError(ValueError):
    """Base class for all credalkit errors."""


class InvalidDistribution(CredalError):
    pass


class ZeroMassEvent(CredalError):
    """Conditioning on an observation that has probability zero."""


class DegenerateMarginal(CredalError):
    """A Y-marginal weight is exactly 0 or 1 where 0 < p < 1 is required."""


class DimensionMismatch(CredalError):
    pass


class MarginalMismatch(CredalError):
    pass


class SizeOverflow(CredalError):
    """Vertex enumeration would exceed the configured cap."""


class EverywhereZeroMass(CredalError):
    """No vertex of a credal set charges the conditioning observation."""


class EmptyList(CredalError):
    pass


class OracleOutOfDomain(CredalError):
    pass


class EnumerationTooLarge(CredalError):
    pass


class NumericalFailure(ArithmeticError):
    """An LP solution failed its optimality certificate."""
