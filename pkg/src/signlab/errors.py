"""Exception hierarchy shared by all signlab modules."""


class SignLabError(Exception):
    """Base class for all errors raised by signlab."""


class InputError(SignLabError, ValueError):
    """Malformed input: non-finite entries, wrong shapes, bad parameters."""


class NotHermitianError(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class SingularBlock(SignLabError):
    pass


class BudgetExhausted(SignLabError):
    """A sampler ran out of retries before producing a matching matrix."""


class BudgetExceeded(SignLabError):
    """A requested exhaustive enumeration is larger than the allowed budget."""


class EvalError(SignLabError):
    """An entrywise function produced a non-finite value."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class PatternViolation(InputError):
    """A matrix has a nonzero entry on a non-edge of the graph."""


class DegenerateV(InputError):
    """A vector that must have pairwise distinct entries has repeats."""


class DegenerateDomain(InputError):
    pass


class DisconnectedGraph(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, position, expected=()):
        self.position = position
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at position {position}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)
