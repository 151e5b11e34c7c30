# -*- coding: utf-8 -*-
from typing import Optional


INPUT_ERROR = 2
"""status (and CLI exit code) of errors caused by invalid input data"""

DOMAIN_ERROR = 3
"""status (and CLI exit code) of errors raised by the mathematics itself"""


class GpwlabError(Exception):
    """This class is used to throw exceptions for all errors in gpwlab."""

    def __init__(self, message, status=None):
        super(Exception, self).__init__(message)

        self.message: str = message
        """error message for this exception"""

        self.status: Optional[int] = status
        """status code for this exception"""


class _InputError(GpwlabError, ValueError):
    def __init__(self, message):
        super().__init__(message, INPUT_ERROR)


class _DomainError(GpwlabError, ValueError):
    def __init__(self, message):
        super().__init__(message, DOMAIN_ERROR)


class SchemaError(_InputError):
    """Invalid configuration or data file"""


class NotHermitianError(_InputError):
    """A matrix expected to be Hermitian is not"""


class LayoutMismatchError(_InputError):
    """Two objects are defined on different register layouts"""


class UnknownRegisterError(_InputError, KeyError):
    """A register name is not part of a layout"""

    def __str__(self):
        return self.message


class BadPmfError(_InputError):
    """A probability table is negative or does not sum to one"""


class BadConditionalError(_InputError):
    """A conditional state of a cq state is missing or invalid"""


class UnsupportedOrderError(_DomainError):
    """The Rényi order is outside of the supported range"""


class NoRootInUnitIntervalError(_DomainError):
    """The erasure probability solving the rate identity is not in [0, 1]"""


class DegenerateDenominatorError(_DomainError):
    """The erasure equation has a vanishing denominator"""


class InfeasibleRatesError(_DomainError):
    """No positive message rate satisfies the rate constraints"""


class EmptyFeasibleSetError(_DomainError):
    """A parametric family produced no state to optimize over"""


class BudgetExceededError(_DomainError):
    """A random codebook would contain too many words"""


class DimensionBudgetError(_DomainError):
    """A decoder would act on too many POVM elements or too large a space"""


class NonConvergenceWarning(RuntimeWarning):
    """An iterative minimization stopped before reaching its tolerance"""


class NotTracePreservingError(_InputError):
    """Kraus operators do not define a trace preserving map"""
