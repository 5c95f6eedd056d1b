from typing import Any, Dict, Optional
from models.enums import ExitCode


class GroupOTError(Exception):
    """
    Base class for every error raised by the solvers and analyzers.

    Args:
        message (str): Human readable description.
        witness (dict, optional): Machine readable data explaining the failure.
    """

    exit_code: ExitCode = ExitCode.INVALID_INPUT

    def __init__(self, message: str, witness: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.witness = witness or {}


class InvalidInputError(GroupOTError, ValueError):
    pass


class ParseError(InvalidInputError):
    pass


class ShapeMismatch(InvalidInputError):
    pass


class InfiniteGroup(InvalidInputError):
    pass


class UnsupportedFactor(InvalidInputError):
    pass


class NonZeroSum(InvalidInputError):
    pass


class AsymmetricMatrix(InvalidInputError):
    pass


class NegativeDistance(InvalidInputError):
    pass


class ZeroOffDiagonal(InvalidInputError):
    pass


class TriangleViolation(InvalidInputError):
    pass


class DuplicatePoint(InvalidInputError):
    pass


class NotZeroMean(InvalidInputError):
    pass


class NotIndecomposable(InvalidInputError):
    pass


class SameSubgroup(InvalidInputError):
    pass


class InconsistentClasses(InvalidInputError):
    pass


class InfeasiblePlan(InvalidInputError):
    pass


class PlanMismatch(InvalidInputError):
    pass


class PlanNotNBP(InvalidInputError):
    pass


class VertexOnBoundary(InvalidInputError):
    pass


class NotExtreme(InvalidInputError):
    pass


class DependentPoints(InvalidInputError):
    pass


class LipschitzViolation(InvalidInputError):
    pass


class NotCalibrated(InvalidInputError):
    pass


class BudgetExceeded(GroupOTError):
    exit_code: ExitCode = ExitCode.BUDGET


class NoNbpPlanForStar(GroupOTError):
    """
    A star met during simplification admits no nonbranching plan; the star
    coefficients are a refutation of NBP for the group.
    """

    exit_code: ExitCode = ExitCode.PROPERTY_FALSE


class InternalCheckFailed(GroupOTError, AssertionError):
    """
    A result failed the exact check it is expected to pass.
    """

    exit_code: ExitCode = ExitCode.INTERNAL
