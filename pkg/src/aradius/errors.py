"""Exception types raised across the package."""


class ARadiusError(Exception):
    """Base class for all package errors."""


class NotSquareError(ARadiusError, ValueError):
    pass


class NonFiniteError(ARadiusError, ValueError):
    pass


class NotHermitianError(ARadiusError, ValueError):
    pass


class NotPSDError(ARadiusError, ValueError):
    pass


class DimensionMismatchError(ARadiusError, ValueError):
    pass


class NonMemberError(ARadiusError, ValueError):
    """The operator does not leave the kernel of the weight invariant in the required way."""


class UnsatisfiableEnsembleError(ARadiusError, ValueError):
    pass


class NotDiagonalError(ARadiusError, ValueError):
    pass


class UnknownCheckerError(ARadiusError, KeyError):
    pass


class IndexBudgetError(ARadiusError, RuntimeError):
    pass


class MalformedMatrixError(ARadiusError, ValueError):
    pass
