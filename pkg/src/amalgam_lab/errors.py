"""Exception hierarchy shared by all modules."""


class AmalgamError(Exception):
    """Base class for every error raised by amalgam_lab."""


class SpecError(AmalgamError, ValueError):
    """A weight, function, grid or space specification is malformed."""


class InvalidWeightError(SpecError):
    """The weight is not a Beurling weight (fails w >= 1 or submultiplicativity)."""


class OutOfDomainError(AmalgamError):
    """A tabulated object was queried outside the range it was tabulated on."""


class AlignmentError(AmalgamError):
    """A location that must lie on the sampling grid does not."""


class WindowOverflowError(AmalgamError):
    """An operation would push non-negligible mass out of the truncation window."""


class HypothesisViolation(AmalgamError):
    """The hypotheses of the theorem a check is keyed to do not hold."""


class UndecidableError(AmalgamError):
    """The decision engine cannot answer exactly for the given weight families."""
