"""Exception types shared across the package."""

__all__ = [
    "JetflowError",
    "DomainError",
    "NonFiniteValue",
    "SingularJacobian",
    "SingularMetric",
    "SingularMass",
    "NotAffine",
    "ChartNotAdapted",
    "NotQuadraticResidual",
    "NoHyperboloidPoint",
    "TrajectoryMismatch",
    "NoOverlap",
    "StepFailure",
    "InvariantViolation",
    "ParseError",
    "UnknownSymbol",
    "DimensionMismatch",
]


class JetflowError(Exception):
    """Base class for all package errors."""


class DomainError(JetflowError, ArithmeticError):
    """A field was evaluated outside its domain (pole, log/sqrt of a negative)."""


class NonFiniteValue(DomainError):
    """A field produced inf/nan without a detected domain violation (overflow)."""


class SingularJacobian(JetflowError):
    pass


class SingularMetric(DomainError):
    pass


class SingularMass(DomainError):
    pass


class NotAffine(JetflowError):
    pass


class ChartNotAdapted(JetflowError):
    """The metric has non-vanishing time-space components g_0i."""


class NotQuadraticResidual(JetflowError):
    """The force left after removing the Christoffel part is not velocity-affine."""


class NoHyperboloidPoint(JetflowError):
    pass


class TrajectoryMismatch(JetflowError):
    pass


class NoOverlap(JetflowError):
    pass


class StepFailure(JetflowError):
    """Adaptive step size underflow; ``trajectory`` holds the accepted part."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class InvariantViolation(JetflowError):
    pass


class ParseError(JetflowError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnknownSymbol(ParseError):
    pass


class DimensionMismatch(JetflowError):
    pass
