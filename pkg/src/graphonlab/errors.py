"""Exception hierarchy shared by all graphonlab modules."""


class GraphonError(ValueError):
    """Base class for all errors raised by graphonlab."""


class AsymmetricInput(GraphonError):
    pass


class OutOfRange(GraphonError):
    pass


class DimensionMismatch(GraphonError):
    pass


class AmplitudeTooLarge(GraphonError):
    pass


class InvalidProbabilities(GraphonError):
    pass


class TooFewNodes(GraphonError):
    pass


class TooLargeForExact(GraphonError):
    pass


class NotDoublyStochastic(GraphonError):
    pass


class NumericalBreakdown(GraphonError):
    """Raised when accumulated rounding leaves no perfect matching on the support."""


class TooLargeToEnumerate(GraphonError):
    pass


class InfiniteDivergence(GraphonError):
    pass


class HypothesisViolated(GraphonError):
    pass


class PackingTooSmall(GraphonError):
    pass


class DegenerateParameters(GraphonError):
    pass


class ExhaustedAttempts(GraphonError):
    """Rejection sampling could not reach the requested packing size.

    The partial result is kept on ``achieved`` so callers can inspect it.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ConfigInvalid(GraphonError):
    pass
