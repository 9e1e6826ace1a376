"""Shared exception types."""


class DimensionMismatchError(ValueError):
    """Operands live in spaces of different dimension."""


class NotEvaluableError(ValueError):
    """The operator has no pointwise evaluation (subdifferential variants)."""


class ParameterError(ValueError):
    """A parameter violates a precondition of the operation it was passed to."""


class CompositionError(ValueError):
    """The requested certificate composition is not covered by any rule."""


class InfeasibleParametersError(ParameterError):
    """Parameter pair rejected by a feasibility validator.

    Carries the full validator report in ``report`` so callers can surface
    the threshold, discriminant and admissible interval.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
