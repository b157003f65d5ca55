"""Exception hierarchy for qgkit."""


class QuasigroupError(Exception):
    """Base class for all errors raised by qgkit."""


class NotLatin(QuasigroupError):
    def __init__(self, kind: str, index: int):
        self.kind = kind
        self.index = index
        super().__init__(f"NotLatin({kind}, {index})")


class DimensionMismatch(QuasigroupError):
    pass


class NotHomomorphism(QuasigroupError):
    pass


class NotEpimorphism(QuasigroupError):
    pass


class NonUniformFibers(QuasigroupError):
    pass


class NotCompatible(QuasigroupError):
    pass


class OrderTooLarge(QuasigroupError):
    pass


class InvalidSystem(QuasigroupError):
    pass


class PreconditionFailed(QuasigroupError):
    pass


class NotGroup(QuasigroupError):
    pass


class NotExample3Instance(QuasigroupError):
    pass


class FormatError(QuasigroupError):
    """A text file does not follow the qg / qmap / bruck layout."""


class InvariantViolation(QuasigroupError):
    """A cross-check between two independent computations disagreed.

    These are never expected for valid inputs; seeing one means a bug.
    """


class InconsistentDecomposition(InvariantViolation):
    pass


class InconsistentPredicates(InvariantViolation):
    pass


class PatternConflict(InvariantViolation):
    pass


class IsotopyFailed(InvariantViolation):
    pass
