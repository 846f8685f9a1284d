"""Exception hierarchy shared by the solver modules."""


class TropiRankError(Exception):
    """Base class for all domain errors raised by tropirank."""


class ShapeError(TropiRankError, ValueError):
    """Operands have incompatible or non-square shapes."""


class ZeroInverseError(TropiRankError, ZeroDivisionError):
    """The semifield zero has no multiplicative inverse."""


class NotColumnRegular(TropiRankError):
    pass


class NonRegularVector(TropiRankError):
    pass


class StarUndefined(TropiRankError):
    """Kleene star requested for a matrix with Tr(A) > 1."""


class InfeasibleConstraints(TropiRankError):
    """The constraint matrix admits no positive rating vector."""


class DegenerateObjective(TropiRankError):
    """An objective matrix has zero spectral radius."""


class NoMixedTerms(TropiRankError):
    """The trace polynomial has no monomial involving both parameters."""


class NotOnFrontier(TropiRankError):
    pass


class OrderLimitExceeded(TropiRankError):
    pass


class ValidationError(TropiRankError):
    """Input matrices violate the pairwise-comparison assumptions.

    The offending entries are available as ``violations``.
    """

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)
