from fractions import Fraction
from math import prod
from typing import Callable, Dict, List, Optional, Sequence, Tuple
from sympy import Rational
from constants import DEFAULT_BUDGET, DEFAULT_MAX_ORDER, PRUNE_FREE_VARS
from helpers.fme import Row, is_feasible, lexmin, substitute_equalities
from helpers.group import (
    add,
    canonical_rep,
    embeds,
    enumerate_abelian_groups,
    enumerate_elements,
    enumerate_zero_mean_triples,
    is_zero,
    norm,
    validate_norm,
)
from helpers.logger import Logger
from helpers.lp import OPTIMAL, linprog_exact
from models.enums import Collinearity
from models.errors import BudgetExceeded, InfiniteGroup, InternalCheckFailed, NotZeroMean
from models.czt import (
    ClassificationRow,
    CollinearityPattern,
    CollinearityVerdict,
    CyclicForcingResult,
    CztReport,
    NormFeasibilityResult,
)
from models.group import GroupElement, GroupSpec, Scalar, group, mod_factor

logger = Logger("czt")

EQUALITIES = ("|a|+|b|=|c|", "|a|+|c|=|b|", "|b|+|c|=|a|")


def _collinear_equality(na: Scalar, nb: Scalar, nc: Scalar) -> Optional[int]:
    for k, (x, y, z) in enumerate(((na, nb, nc), (na, nc, nb), (nb, nc, na))):
        if x + y == z:
            return k
    return None


def collinearity(
    spec: GroupSpec, a: GroupElement, b: GroupElement, c: GroupElement
) -> CollinearityVerdict:
    """
    Evaluate the three collinearity equalities of a zero-mean triple.

    Args:
        spec (GroupSpec): The group.
        a, b, c (GroupElement): Elements with a + b + c = 0.

    Returns:
        CollinearityVerdict: The first equality that holds, noncollinear, or trivial for (0, 0, 0).
    """
    if not is_zero(spec, add(spec, add(spec, a, b), c)):
        raise NotZeroMean(f"{a} + {b} + {c} is not zero", {"triple": (a, b, c)})
    norms = (norm(spec, a), norm(spec, b), norm(spec, c))
    if all(v == 0 for v in norms):
        return CollinearityVerdict(Collinearity.TRIVIAL, norms=norms)
    k = _collinear_equality(*norms)
    if k is None:
        return CollinearityVerdict(Collinearity.NONCOLLINEAR, norms=norms)
    return CollinearityVerdict(Collinearity.COLLINEAR, EQUALITIES[k], norms)


def has_czt(spec: GroupSpec) -> CztReport:
    """
    Exhaustive collinearity check over every zero-mean triple of a finite group.

    Args:
        spec (GroupSpec): A finite group with a validated norm.

    Returns:
        CztReport: ok, or the first noncollinear triple.
    """
    if not spec.is_finite:
        raise InfiniteGroup(f"Group {spec.label} is infinite")
    triples = enumerate_zero_mean_triples(spec)
    for checked, (a, b, c) in enumerate(triples, start=1):
        verdict = collinearity(spec, a, b, c)
        if verdict.kind is Collinearity.NONCOLLINEAR:
            return CztReport(False, checked, (a, b, c), verdict.norms)
    return CztReport(True, len(triples))


def czt_sampled(
    oracle: Callable[[Tuple], Scalar], triples: Sequence[Tuple[Tuple, Tuple, Tuple]]
) -> CztReport:
    """
    Collinearity of sampled triples in a torsion-free group given by coordinate tuples and a norm oracle.

    Args:
        oracle (Callable[[Tuple], Scalar]): Exact norm.
        triples (Sequence): Triples (a, b, c) with a + b + c = 0 componentwise.

    Returns:
        CztReport: ok, or the first noncollinear triple.
    """
    for checked, (a, b, c) in enumerate(triples, start=1):
        if any(x + y + z != 0 for x, y, z in zip(a, b, c)):
            raise NotZeroMean(f"{a} + {b} + {c} is not zero", {"triple": (a, b, c)})
        norms = (oracle(a), oracle(b), oracle(c))
        if any(v != 0 for v in norms) and _collinear_equality(*norms) is None:
            return CztReport(False, checked, (a, b, c), norms)
    return CztReport(True, len(triples))


def czt_cyclic_forcing(values: Sequence) -> CyclicForcingResult:
    """
    Check the linearity |ng| = n|g| forced on a cyclic segment by collinearity.

    Args:
        values (Sequence): Norms |g|, |2g|, ..., |Ng|.

    Returns:
        CyclicForcingResult: ok, or the first n breaking linearity together with a
        noncollinear triple of multiples found inside the segment, if any.
    """
    vals = [Fraction(v) for v in values]
    bad = next((n for n in range(2, len(vals) + 1) if vals[n - 1] != n * vals[0]), None)
    if bad is None:
        return CyclicForcingResult(True)
    for total in range(2, len(vals) + 1):
        for a in range(1, total // 2 + 1):
            b = total - a
            if _collinear_equality(vals[a - 1], vals[b - 1], vals[total - 1]) is None:
                return CyclicForcingResult(False, bad, (-a, -b, total), True)
    return CyclicForcingResult(False, bad, None, False)


def _class_structure(
    spec: GroupSpec,
) -> Tuple[List[Tuple[GroupElement, ...]], Dict[GroupElement, int], List[Tuple[int, int, int]]]:
    elements = enumerate_elements(spec)
    reps = sorted({canonical_rep(spec, x) for x in elements if not is_zero(spec, x)})
    index = {rep: k for k, rep in enumerate(reps)}
    class_of = {x: index[canonical_rep(spec, x)] for x in elements if not is_zero(spec, x)}
    classes = [tuple(x for x in elements if class_of.get(x) == k) for k in range(len(reps))]
    triples = set()
    for a, b, c in enumerate_zero_mean_triples(spec):
        if any(is_zero(spec, x) for x in (a, b, c)):
            continue
        triples.add(tuple(sorted((class_of[a], class_of[b], class_of[c]))))
    return classes, class_of, sorted(triples)


def _unit(k: int, n: int, scale: int = 1) -> List[Rational]:
    row = [Rational(0)] * n
    row[k] += scale
    return row


def _triangle_rows(triples: Sequence[Tuple[int, int, int]], n: int) -> List[Row]:
    rows: List[Row] = []
    for a, b, c in triples:
        for big, x, y in ((c, a, b), (b, a, c), (a, b, c)):
            coeffs = _unit(big, n)
            coeffs[x] -= 1
            coeffs[y] -= 1
            rows.append((tuple(coeffs), Rational(0)))
    # scale normalization |x| >= 1
    rows.extend((tuple(_unit(k, n, -1)), Rational(-1)) for k in range(n))
    return rows


def _equality_row(triple: Tuple[int, int, int], choice: int, n: int) -> Row:
    a, b, c = triple
    x, y, z = ((a, b, c), (a, c, b), (b, c, a))[choice]
    coeffs = _unit(x, n)
    coeffs[y] += 1
    coeffs[z] -= 1
    return tuple(coeffs), Rational(0)


def _feasible(ineqs: Sequence[Row], eqs: Sequence[Row], n: int, prune_vars: int) -> bool:
    reduced, free = substitute_equalities(eqs, ineqs)
    if reduced is None:
        return False
    if free <= prune_vars:
        return is_feasible(reduced)[0]
    result = linprog_exact(
        [Rational(0)] * n,
        A_ub=[r[0] for r in ineqs],
        b_ub=[r[1] for r in ineqs],
        A_eq=[r[0] for r in eqs],
        b_eq=[r[1] for r in eqs],
    )
    return result.status == OPTIMAL


def _describe(
    pattern: Sequence[int], triples: Sequence[Tuple[int, int, int]], reps: Sequence[GroupElement]
) -> str:
    parts = []
    for (a, b, c), choice in zip(triples, pattern):
        x, y, z = ((a, b, c), (a, c, b), (b, c, a))[choice]
        parts.append(f"|{_fmt(reps[x])}|+|{_fmt(reps[y])}|=|{_fmt(reps[z])}|")
    return " and ".join(parts) if parts else "any norm"


def _fmt(x: GroupElement) -> str:
    c = x[0]
    return f"({','.join(str(r) for r in c)})" if isinstance(c, tuple) else str(c)


def czt_norm_feasibility(
    moduli: Sequence[int],
    budget: int = DEFAULT_BUDGET,
    prune_vars: int = PRUNE_FREE_VARS,
) -> NormFeasibilityResult:
    """
    Decide whether Z_m1 x ... x Z_mk carries a norm with collinear zero-mean triples.

    Unknowns are the norms of the classes {x, -x}. Every class triple of a nontrivial
    zero-mean triple contributes its three triangle inequalities and one chosen equality;
    patterns are explored depth first and a branch is refuted as soon as its partial
    system is infeasible, so the refuted counts add up to 3^T over T class triples.

    Args:
        moduli (Sequence[int]): Cyclic factors of the group.
        budget (int): Maximum number of search nodes.
        prune_vars (int): Largest free-variable count decided by Fourier-Motzkin; wider
            partial systems are decided by the exact simplex.

    Returns:
        NormFeasibilityResult: A witness norm table (lexicographically smallest vertex over
        the feasible patterns, minimum norm 1) or the exhaustive refutation trace.
    """
    moduli = tuple(moduli)
    order = prod(moduli)
    placeholder = group(mod_factor(moduli, [0] + [1] * (order - 1)))
    classes, class_of, triples = _class_structure(placeholder)
    reps = [cls[0] for cls in classes]
    n, t = len(classes), len(triples)
    base = _triangle_rows(triples, n)
    total = 3 ** t
    refuted = 0
    visited = 0
    refutations: List[Dict] = []
    feasible_patterns: List[Tuple[int, ...]] = []
    witnesses: List[Tuple[Fraction, ...]] = []

    def visit(pattern: Tuple[int, ...], eqs: List[Row]) -> None:
        nonlocal refuted, visited
        visited += 1
        if visited > budget:
            raise BudgetExceeded(
                f"Pattern search over {placeholder.label} exceeded {budget} nodes",
                {"budget": budget, "moduli": moduli},
            )
        if not _feasible(base, eqs, n, prune_vars):
            covered = 3 ** (t - len(pattern))
            refuted += covered
            refutations.append({"prefix": pattern, "patterns": covered})
            return
        if len(pattern) == t:
            point = lexmin(base + [(tuple(-a for a in r[0]), -r[1]) for r in eqs] + eqs, n)
            if point is None:
                refuted += 1
                refutations.append({"prefix": pattern, "patterns": 1})
                return
            low = min(point) if point else Fraction(1)
            feasible_patterns.append(pattern)
            witnesses.append(tuple(v / low for v in point))
            return
        for choice in range(3):
            visit(pattern + (choice,), eqs + [_equality_row(triples[len(pattern)], choice, n)])

    visit((), [])
    trace = {
        "classes": n,
        "class_triples": t,
        "patterns_total": total,
        "refuted": refuted,
        "feasible_patterns": len(feasible_patterns),
        "nodes": visited,
    }
    logger.info(f"{placeholder.label}: {trace}")
    if not feasible_patterns:
        trace["refutations"] = refutations
        return NormFeasibilityResult(
            moduli, False, infeasibility_trace=trace, classes=tuple(classes)
        )
    best = min(witnesses)
    table = [Fraction(0)] * order
    for position, x in enumerate(enumerate_elements(placeholder)):
        if x in class_of:
            table[position] = best[class_of[x]]
    family = tuple(_describe(p, triples, reps) for p in feasible_patterns)
    patterns = tuple(CollinearityPattern(tuple(triples), p) for p in feasible_patterns)
    result = NormFeasibilityResult(
        moduli, True, tuple(table), family, trace, tuple(classes), patterns
    )
    witness_group = group(mod_factor(moduli, table))
    violation = validate_norm(witness_group)
    report = has_czt(witness_group)
    if violation is not None or not report.ok:
        raise InternalCheckFailed(
            f"Witness norm {table} for {witness_group.label} fails its own check",
            {"moduli": moduli, "norm_violation": violation, "noncollinear": report.witness},
        )
    return result


def classify_groups(
    max_order: int = DEFAULT_MAX_ORDER, budget: int = DEFAULT_BUDGET
) -> List[ClassificationRow]:
    """
    Decide norm feasibility for every finite Abelian group of order 2..max_order.

    A norm on G restricts to a norm on each of its subgroups, so a group containing a copy
    of an already refuted group is refuted without a search; only the remaining groups run
    the pattern search.

    Args:
        max_order (int): Largest order.
        budget (int): Node budget per searched group.

    Returns:
        List[ClassificationRow]: One row per group, in enumeration order; ``details["via"]``
        is "search" or the label of the refuted subgroup.
    """
    rows = []
    refuted: List[Tuple[Tuple[int, ...], str]] = []
    for moduli in enumerate_abelian_groups(max_order):
        label = "x".join(f"Z{m}" for m in moduli)
        smaller = next((s for s in refuted if embeds(s[0], moduli)), None)
        if smaller is not None:
            trace = {"inherited_from": smaller[1], "subgroup_moduli": smaller[0]}
            result = NormFeasibilityResult(moduli, False, infeasibility_trace=trace)
            via = smaller[1]
        else:
            result = czt_norm_feasibility(moduli, budget)
            via = "search"
        if not result.feasible:
            refuted.append((moduli, label))
        rows.append(ClassificationRow(moduli, label, result, {"order": prod(moduli), "via": via}))
        logger.info(f"{label}: {'feasible' if result.feasible else 'infeasible'} ({via})")
    return rows
