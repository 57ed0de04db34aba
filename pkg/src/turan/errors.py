"""Exception types raised across the package."""


class TuranError(Exception):
    """Base class for all package errors."""


class InputError(TuranError, ValueError):
    pass


class DivisibilityError(InputError):
    """Strict construction requested with (k - 1) not dividing n."""


class FormatError(InputError):
    """Malformed hypergraph text."""


class BudgetExceeded(TuranError, RuntimeError):
    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class DegenerateGradientError(TuranError, ArithmeticError):
    """Constraint gradient vanishes, so the multiplier is unidentifiable."""
