"""Exception hierarchy.

Domain errors are bad inputs; numeric errors are failures of a computation
on valid inputs (non-convergence, drift, inconsistent traces).
"""


class SpingeoError(Exception):
    pass


class DomainError(SpingeoError, ValueError):
    pass


class ValidationError(DomainError):
    pass


class NotHermitianError(ValidationError):
    pass


class TraceError(ValidationError):
    pass


class NotPositiveError(ValidationError):
    pass


class NumericError(SpingeoError, ArithmeticError):
    pass


class NumericConsistencyError(NumericError):
    pass


class ConvergenceError(NumericError):
    pass


class IntegrationDriftError(NumericError):
    pass
