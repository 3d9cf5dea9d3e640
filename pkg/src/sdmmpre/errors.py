"""Exception hierarchy shared by every module of the package."""


class SDMMError(Exception):
    """Base class for all errors raised by sdmmpre."""


class InvalidModulus(SDMMError, ValueError):
    pass


class DivisionByZero(SDMMError, ZeroDivisionError):
    pass


class FieldMismatch(SDMMError, ValueError):
    pass


class DimensionMismatch(SDMMError, ValueError):
    pass


class SingularSystem(SDMMError, ArithmeticError):
    """The generalized Vandermonde system has no unique solution.

    Usually means the evaluation points were badly chosen; resample them.
    """


class InvalidChainLength(SDMMError, ValueError):
    pass


class InvalidFraction(SDMMError, ValueError):
    pass


class PartitionError(SDMMError, ValueError):
    pass


class PointSelectionFailed(SDMMError, RuntimeError):
    """No admissible evaluation points were found; use a larger field."""


class AuditTooLarge(SDMMError, ValueError):
    pass


class SearchTooLarge(SDMMError, ValueError):
    def __init__(self, estimate, limit):
        super().__init__(f"search space has ~{estimate} tables, limit is {limit}")
        self.estimate = estimate
        self.limit = limit


class EmptySet(SDMMError, ValueError):
    pass
