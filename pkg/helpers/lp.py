from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Optional, Sequence
from sympy import Matrix, Rational
from sympy.solvers.simplex import InfeasibleLPError, UnboundedLPError, linprog
from helpers.logger import Logger

logger = Logger("lp")

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: Optional[List[Fraction]] = None
    value: Optional[Fraction] = None


def to_rational(value: Any) -> Rational:
    if isinstance(value, Rational):
        return value
    value = Fraction(value)
    return Rational(value.numerator, value.denominator)


def to_fraction(value: Any) -> Fraction:
    value = to_rational(value)
    return Fraction(int(value.p), int(value.q))


def linprog_exact(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    free: bool = False,
    maximize: bool = False,
) -> LPResult:
    """
    Exact rational linear program, solved by sympy's two-phase simplex with Bland's rule.

    Args:
        c (Sequence): Objective coefficients.
        A_ub (Sequence[Sequence]): Rows of A_ub x <= b_ub.
        b_ub (Sequence): Right-hand sides of the inequalities.
        A_eq (Sequence[Sequence]): Rows of A_eq x = b_eq.
        b_eq (Sequence): Right-hand sides of the equalities.
        free (bool): Variables are unrestricted in sign when True, nonnegative otherwise.
        maximize (bool): Maximize instead of minimize.

    Returns:
        LPResult: Status, optimal point and optimal value (in the caller's sense), as Fractions.
    """
    sign = -1 if maximize else 1
    objective = [sign * to_rational(v) for v in c]
    n = len(objective)
    A = [[to_rational(v) for v in row] for row in A_ub]
    b = [to_rational(v) for v in b_ub]
    if not A:
        # linprog sizes the system from A, so an empty block becomes 0 <= 0
        A, b = [[Rational(0)] * n], [Rational(0)]
    A_eq = [[to_rational(v) for v in row] for row in A_eq]
    if free:
        # x = x+ - x-, both nonnegative
        objective = objective + [-v for v in objective]
        A = [row + [-v for v in row] for row in A]
        A_eq = [row + [-v for v in row] for row in A_eq]
    equalities = {}
    if A_eq:
        equalities = {"A_eq": A_eq, "b_eq": [to_rational(v) for v in b_eq]}
    try:
        value, x = linprog(objective, A, b, **equalities)
    except InfeasibleLPError:
        logger.debug(f"LP with {n} variables and {len(A) + len(A_eq)} rows: {INFEASIBLE}")
        return LPResult(INFEASIBLE)
    except UnboundedLPError:
        logger.debug(f"LP with {n} variables and {len(A) + len(A_eq)} rows: {UNBOUNDED}")
        return LPResult(UNBOUNDED)
    logger.debug(f"LP with {n} variables and {len(A) + len(A_eq)} rows: {OPTIMAL}")
    point = [x[k] - x[n + k] for k in range(n)] if free else list(x[:n])
    return LPResult(OPTIMAL, [to_fraction(v) for v in point], sign * to_fraction(value))


def rank(vectors: Sequence[Sequence]) -> int:
    """
    Exact rank of a list of rational vectors.
    """
    if not vectors:
        return 0
    return Matrix([[to_rational(v) for v in vec] for vec in vectors]).rank()
