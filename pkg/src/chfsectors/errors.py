"""Exception types raised across the package.

Every domain error derives from :class:`ChfError` so callers (the CLI in
particular) can map them to a single exit code.
"""


class ChfError(ValueError):
    """Base class for precondition failures."""


class PoleAtC(ChfError):
    pass


class NoConvergence(ChfError):
    pass


class DomainX(ChfError):
    pass


class DomainY(ChfError):
    pass


class IntegerC(ChfError):
    pass


class CoefficientPole(ChfError):
    pass


class PhaseNotReal(ChfError):
    pass


class ReflectionDomain(ChfError):
    pass


class NotInSector(ChfError):
    pass


class NonMonotoneMap(ChfError):
    pass


class NotBoundState(ChfError):
    pass


class Annihilated(ChfError):
    pass


class LabelConstraint(ChfError):
    pass


class SaturatedWarning(RuntimeWarning):
    """Inputs outside the guaranteed |x|, |a|, |c| <= 50 domain."""
