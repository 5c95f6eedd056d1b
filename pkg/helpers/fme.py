from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple
from sympy import Matrix, Rational
from helpers.logger import Logger
from helpers.lp import to_fraction, to_rational

logger = Logger("fme")

# a.x <= b (inequality) or a.x = b (equality), depending on the list it sits in
Row = Tuple[Tuple[Rational, ...], Rational]

ZERO = Rational(0)


def as_row(coeffs: Sequence, rhs) -> Row:
    return tuple(to_rational(a) for a in coeffs), to_rational(rhs)


def _as_rows(rows: Sequence) -> List[Row]:
    return [as_row(coeffs, rhs) for coeffs, rhs in rows]


def _normalize(row: Row) -> Row:
    coeffs, rhs = row
    lead = next((abs(a) for a in coeffs if a != 0), None)
    if lead is None or lead == 1:
        return row
    return tuple(a / lead for a in coeffs), rhs / lead


def _dedupe(rows: Sequence[Row]) -> List[Row]:
    """
    Keep the tightest right-hand side per normalized coefficient vector; drop 0 <= b rows with b >= 0.
    """
    best: Dict[Tuple[Rational, ...], Rational] = {}
    for row in rows:
        coeffs, rhs = _normalize(row)
        if all(a == 0 for a in coeffs) and rhs >= 0:
            continue
        if coeffs not in best or rhs < best[coeffs]:
            best[coeffs] = rhs
    return [(coeffs, rhs) for coeffs, rhs in best.items()]


def eliminate(rows: Sequence[Row], k: int) -> List[Row]:
    """
    One Fourier-Motzkin step: project the inequality system along variable k.

    Args:
        rows (Sequence[Row]): Inequalities a.x <= b.
        k (int): Index of the variable to eliminate.

    Returns:
        List[Row]: Inequalities with a zero coefficient on variable k.
    """
    rows = _as_rows(rows)
    pos = [r for r in rows if r[0][k] > 0]
    neg = [r for r in rows if r[0][k] < 0]
    out = [r for r in rows if r[0][k] == 0]
    for pc, pb in pos:
        for nc, nb in neg:
            sp, sn = 1 / pc[k], 1 / -nc[k]
            coeffs = tuple(sp * a + sn * b for a, b in zip(pc, nc))
            out.append((coeffs, sp * pb + sn * nb))
    return _dedupe(out)


def _contradiction(rows: Sequence[Row]) -> Optional[Row]:
    return next((r for r in rows if all(a == 0 for a in r[0]) and r[1] < 0), None)


def _active_vars(rows: Sequence[Row]) -> List[int]:
    if not rows:
        return []
    n = len(rows[0][0])
    return [k for k in range(n) if any(r[0][k] != 0 for r in rows)]


def _project_all(rows: Sequence[Row], keep: Sequence[int] = ()) -> List[Row]:
    rows = _dedupe(rows)
    while True:
        if _contradiction(rows) is not None:
            return rows
        candidates = [k for k in _active_vars(rows) if k not in keep]
        if not candidates:
            return rows
        # cheapest elimination first
        k = min(
            candidates,
            key=lambda v: (
                sum(1 for r in rows if r[0][v] > 0) * sum(1 for r in rows if r[0][v] < 0),
                v,
            ),
        )
        rows = eliminate(rows, k)


def substitute_equalities(
    equalities: Sequence[Row], inequalities: Sequence[Row]
) -> Tuple[Optional[List[Row]], int]:
    """
    Bring the equalities to reduced row echelon form and substitute the pivots into the inequalities.

    Args:
        equalities (Sequence[Row]): Rows a.x = b.
        inequalities (Sequence[Row]): Rows a.x <= b.

    Returns:
        Tuple[Optional[List[Row]], int]: The reduced inequalities (None if the equalities are
        inconsistent) and the number of variables left free.
    """
    eqs = _as_rows(equalities)
    reduced = _as_rows(inequalities)
    if not (eqs or reduced):
        return [], 0
    n = len((eqs or reduced)[0][0])
    pivots: Tuple[int, ...] = ()
    if eqs:
        echelon, pivots = Matrix([list(a) + [b] for a, b in eqs]).rref()
        if n in pivots:
            return None, 0
        for i, p in enumerate(pivots):
            pivot_row = echelon.row(i)
            reduced = [
                (
                    tuple(a - coeffs[p] * pivot_row[j] for j, a in enumerate(coeffs)),
                    rhs - coeffs[p] * pivot_row[n],
                )
                if coeffs[p] != 0
                else (coeffs, rhs)
                for coeffs, rhs in reduced
            ]
    free = len([k for k in range(n) if k not in pivots and any(r[0][k] != 0 for r in reduced)])
    return reduced, free


def is_feasible(
    inequalities: Sequence[Row], equalities: Sequence[Row] = ()
) -> Tuple[bool, Optional[Row]]:
    """
    Decide feasibility of a rational linear system by full Fourier-Motzkin projection.

    Args:
        inequalities (Sequence[Row]): Rows a.x <= b.
        equalities (Sequence[Row]): Rows a.x = b.

    Returns:
        Tuple[bool, Optional[Row]]: Verdict and, when infeasible, a derived row 0 <= b with b < 0
        (an empty coefficient row stands for inconsistent equalities).
    """
    reduced, _ = substitute_equalities(equalities, inequalities)
    if reduced is None:
        return False, ((), Rational(-1))
    contradiction = _contradiction(_project_all(reduced))
    return contradiction is None, contradiction


def lexmin(inequalities: Sequence[Row], n: int) -> Optional[List[Fraction]]:
    """
    Lexicographically smallest point of a polyhedron bounded below in every coordinate.

    Args:
        inequalities (Sequence[Row]): Rows a.x <= b over n variables.
        n (int): Number of variables.

    Returns:
        Optional[List[Fraction]]: The point, or None if the system is infeasible or unbounded below.
    """
    point: List[Rational] = []
    rows = _dedupe(_as_rows(inequalities))
    for k in range(n):
        fixed = []
        for coeffs, rhs in rows:
            shift = sum((a * v for a, v in zip(coeffs[:k], point)), ZERO)
            fixed.append(((ZERO,) * k + coeffs[k:], rhs - shift))
        projected = _project_all(fixed, keep=(k,))
        if _contradiction(projected) is not None:
            return None
        lower = [r[1] / r[0][k] for r in projected if r[0][k] < 0]
        upper = [r[1] / r[0][k] for r in projected if r[0][k] > 0]
        if not lower:
            return None
        value = max(lower)
        if upper and value > min(upper):
            return None
        point.append(value)
    return [to_fraction(v) for v in point]
