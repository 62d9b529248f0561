"""Exception hierarchy shared by all bhbounds modules."""


class BHError(ValueError):
    """Base class for argument and domain errors raised by bhbounds."""


class EntryOutOfRange(BHError):
    pass


class BadPositions(BHError):
    pass


class LengthMismatch(BHError):
    pass


class DimensionMismatch(LengthMismatch):
    pass


class ArityMismatch(LengthMismatch):
    pass


class Infeasible(BHError):
    """No nonnegative weight vector reproduces the requested tuple."""


class NotBohnenblustHille(BHError):
    """A bound engine was given a tuple whose defect is not zero."""


class NonPositiveArgument(BHError):
    pass


class ExponentOutOfRange(BHError):
    pass


class BadArguments(BHError):
    pass


class CapTooSmall(BHError):
    pass


class FamilyError(BHError):
    """A generator tuple is not of the k-block shape with a known constant."""


class BudgetExceeded(BHError):
    pass


class WrongField(BHError):
    pass


class EmptyCampaign(BHError):
    pass


class ReplayMismatch(RuntimeError):
    """A certificate's derivation does not re-evaluate to its stored value."""
