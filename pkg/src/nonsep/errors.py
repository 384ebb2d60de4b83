"""Exception hierarchy shared by all modules."""


class NonsepError(Exception):
    """Base class for every error raised by this package."""


class DegenerateInput(NonsepError, ValueError):
    pass


class NonPositiveRatio(NonsepError, ValueError):
    pass


class ParseError(NonsepError, ValueError):
    pass


class ValidationError(NonsepError, ValueError):
    pass


class BadCount(NonsepError, ValueError):
    pass


class GenerationFailed(NonsepError, RuntimeError):
    pass


class NotSymmetric(NonsepError, ValueError):
    pass


class DimensionUnsupported(NonsepError, ValueError):
    pass


class TooLarge(NonsepError, ValueError):
    pass


class NumericFailure(NonsepError, ArithmeticError):
    pass


class ContainmentFailed(NonsepError, AssertionError):
    pass


class DisconnectedUnion(NonsepError, ValueError):
    pass


class NSViolated(NonsepError, AssertionError):
    pass


class VerificationFailed(NonsepError, AssertionError):
    pass


class StepFailed(NonsepError, AssertionError):
    pass


class TheoremViolated(NonsepError, AssertionError):
    pass
