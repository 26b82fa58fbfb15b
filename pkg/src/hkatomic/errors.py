"""Exception hierarchy.  Negative mathematical verdicts are never exceptions."""


class HKError(Exception):
    """Base class for all library errors."""


class PreconditionError(HKError, ValueError):
    """An operation was called outside its documented domain."""


class DegenerateForm(PreconditionError):
    pass


class DimensionMismatch(PreconditionError):
    pass


class NotDegreeZero(PreconditionError):
    """A class expected in the H^2 block has an alpha or beta coordinate."""


class IsotropicClass(PreconditionError):
    pass


class DegreeTooSmall(PreconditionError):
    pass


class NotIsometry(PreconditionError):
    pass


class InvalidPeriod(PreconditionError):
    pass


class NotHodgeType(PreconditionError):
    pass


class NotHarmonic(PreconditionError):
    pass


class ZeroRank(PreconditionError):
    pass


class NotAtomic(PreconditionError):
    pass


class BadConstantTerm(PreconditionError):
    pass


class BadInput(PreconditionError):
    pass


class MalformedInput(HKError, ValueError):
    """JSON that does not describe a lattice, vector or period."""


class UnknownPreset(HKError, KeyError):
    pass


class SplitFailure(HKError, ArithmeticError):
    """Internal error: the harmonic splitting system was singular."""


class WitnessAmbiguous(HKError):
    """The annihilator has the atomic codimension but no unique fixed line."""
