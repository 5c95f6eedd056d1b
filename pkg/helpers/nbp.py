from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple, Union
import networkx as nx
from constants import DEFAULT_BUDGET, DEFAULT_N_MAX
from helpers.group import (
    add,
    enumerate_elements,
    is_zero,
    multiple,
    neg,
    norm,
    norms_equal,
    require_rational_norm,
    sub,
    sum_elements,
    zero,
)
from helpers.logger import Logger
from helpers.lp import OPTIMAL, linprog_exact, rank
from helpers.solver import feasibility_defect, flow_matrix, min_weight_matching, plan_cost
from helpers.structure import list_indecomposables
from models.enums import FactorKind
from models.errors import (
    BudgetExceeded,
    DependentPoints,
    InfeasiblePlan,
    NonZeroSum,
    NotExtreme,
    ShapeMismatch,
    UnsupportedFactor,
)
from models.group import GroupElement, GroupSpec, Scalar
from models.metric import FiniteMetric, Instance
from models.plan import (
    Counterexample,
    ExtremeConditionReport,
    NbpReport,
    PolytopeNorm,
    ProofOfAbsence,
    TransportPlan,
)

logger = Logger("nbp")

Pairs = List[Tuple[int, int]]


def support_graph(plan: TransportPlan) -> nx.Graph:
    """
    Undirected graph on the indices 0..n-1 with an edge {i, j} whenever g_ij != 0.
    """
    graph = nx.Graph()
    graph.add_nodes_from(range(plan.n))
    graph.add_edges_from(
        (i, j)
        for i in range(plan.n)
        for j in range(i + 1, plan.n)
        if not is_zero(plan.group, plan.entry(i, j))
    )
    return graph


def is_acyclic(plan: TransportPlan) -> Tuple[bool, Optional[Tuple[int, ...]]]:
    """
    Whether the support graph is a forest.

    Args:
        plan (TransportPlan): The plan.

    Returns:
        Tuple[bool, Optional[Tuple[int, ...]]]: Verdict and the vertices of a cycle when there is one.
    """
    try:
        cycle = nx.find_cycle(support_graph(plan))
    except nx.NetworkXNoCycle:
        return True, None
    return False, tuple(u for u, _ in cycle)


def violated_rows(
    group: GroupSpec, entries: Sequence[Sequence[GroupElement]], coeffs: Sequence[GroupElement]
) -> Tuple[Tuple[int, Scalar, Scalar], ...]:
    violated = []
    for i, g in enumerate(coeffs):
        spread = sum((norm(group, x) for x in entries[i]), Fraction(0))
        if not norms_equal(norm(group, g), spread):
            violated.append((i, norm(group, g), spread))
    return tuple(violated)


def check_nbp(plan: TransportPlan, inst: Instance) -> NbpReport:
    """
    Evaluate the nonbranching equalities |g_i| = sum_j |g_ij| on a feasible plan.

    Args:
        plan (TransportPlan): A plan for inst.
        inst (Instance): The instance.

    Returns:
        NbpReport: Violated rows and the acyclicity verdict of the support graph.
    """
    defect = feasibility_defect(plan, inst)
    if defect is not None:
        raise InfeasiblePlan(f"Plan violates the {defect['condition']} condition", defect)
    violated = violated_rows(inst.group, plan.entries, inst.coeffs)
    acyclic, cycle = is_acyclic(plan)
    return NbpReport(plan, not violated, acyclic, violated, cycle)


def _check_constructible(group: GroupSpec) -> None:
    require_rational_norm(group, "construct_nbp")
    for k, f in enumerate(group.factors):
        if f.kind is FactorKind.ZMOD and not f.is_parity:
            raise UnsupportedFactor(
                f"Factor {k} ({f.label}) has no nonbranching construction", {"factor": k}
            )


def is_constructible(group: GroupSpec) -> bool:
    """True when every factor is Z, R or Z2."""
    return all(f.kind in (FactorKind.Z, FactorKind.R) or f.is_parity for f in group.factors)


def _merge_values(values: Sequence[Fraction]) -> Dict[Tuple[int, int], Fraction]:
    """
    Largest positive absorbs the most negative until every value is zero; ties go to the lower index.
    """
    values = list(values)
    moves: Dict[Tuple[int, int], Fraction] = {}
    while any(v != 0 for v in values):
        i = max(range(len(values)), key=lambda k: (values[k], -k))
        j = min(range(len(values)), key=lambda k: (values[k], k))
        t = min(values[i], -values[j])
        moves[(i, j)] = moves.get((i, j), Fraction(0)) + t
        values[i] -= t
        values[j] += t
    return moves


def _consecutive_pairs(ones: Sequence[int]) -> Pairs:
    return [(ones[k], ones[k + 1]) for k in range(0, len(ones), 2)]


def _klein_pairs(coeffs: Sequence[GroupElement]) -> Tuple[Pairs, Pairs]:
    """
    Pair equal classes of (1,1), (1,0), (0,1) and route a leftover triple a -> b, a -> c.

    Returns the pairs carrying the first and the second coordinate.
    """
    classes = {c: [i for i, g in enumerate(coeffs) if g == c] for c in ((1, 1), (1, 0), (0, 1))}
    first: Pairs = []
    second: Pairs = []
    leftover = {}
    for c, members in classes.items():
        if len(members) % 2:
            leftover[c] = members[-1]
            members = members[:-1]
        for pair in _consecutive_pairs(members):
            if c[0]:
                first.append(pair)
            if c[1]:
                second.append(pair)
    if leftover:
        a, b, c = leftover[(1, 1)], leftover[(1, 0)], leftover[(0, 1)]
        first.append((min(a, b), max(a, b)))
        second.append((min(a, c), max(a, c)))
    return first, second


def _untangle(first: Pairs, second: Pairs, n: int) -> Pairs:
    """
    Replace the second matching on every alternating cycle of first + second by the first matching.

    Both matchings are optimal, so the swap keeps the cost and the union becomes a forest.
    """
    second = list(second)
    while True:
        graph = nx.Graph()
        graph.add_nodes_from(range(n))
        graph.add_edges_from(first)
        graph.add_edges_from(second)
        try:
            cycle = nx.find_cycle(graph)
        except nx.NetworkXNoCycle:
            return second
        on_cycle = {u for u, _ in cycle}
        second = [p for p in second if p[0] not in on_cycle] + [p for p in first if p[0] in on_cycle]
        logger.debug(f"Untangled alternating cycle {sorted(on_cycle)}")


def _parity_pairs(values: Sequence, metric: Optional[FiniteMetric]) -> Pairs:
    ones = [i for i, v in enumerate(values) if v == 1]
    if metric is None:
        return _consecutive_pairs(ones)
    _, pairs = min_weight_matching(metric, ones)
    return pairs


def construct_nbp(
    group: GroupSpec,
    coeffs: Sequence[GroupElement],
    metric: Optional[FiniteMetric] = None,
) -> TransportPlan:
    """
    Build a nonbranching plan factor by factor over Z, R and Z2 factors.

    Without a metric, Z and R factors use the sort-merge induction and Z2 factors the
    consecutive pairing (class-based pairing when the group is Z2 x Z2). With a metric,
    every factor gets an optimal nonbranching plan (forest min-cost flow, minimum
    matching) and the result is a cost-optimal plan.

    Args:
        group (GroupSpec): A product of Z, R and Z2 factors.
        coeffs (Sequence[GroupElement]): Coefficients summing to zero.
        metric (FiniteMetric, optional): Points to optimize the plan for.

    Returns:
        TransportPlan: A plan satisfying every nonbranching equality.
    """
    _check_constructible(group)
    coeffs = tuple(coeffs)
    if not is_zero(group, sum_elements(group, coeffs)):
        raise NonZeroSum("Coefficients do not sum to zero")
    if metric is not None and metric.n != len(coeffs):
        raise ShapeMismatch(f"{len(coeffs)} coefficients for {metric.n} points")
    n, r = len(coeffs), len(group.factors)
    columns: List[List[List]] = []
    klein = r == 2 and all(f.is_parity for f in group.factors)
    if klein:
        if metric is None:
            first, second = _klein_pairs(coeffs)
        else:
            first = _parity_pairs([g[0] for g in coeffs], metric)
            second = _untangle(first, _parity_pairs([g[1] for g in coeffs], metric), n)
        for pairs in (first, second):
            column = [[0] * n for _ in range(n)]
            for i, j in pairs:
                column[i][j] = column[j][i] = 1
            columns.append(column)
    else:
        for k, f in enumerate(group.factors):
            values = [g[k] for g in coeffs]
            if f.is_parity:
                column = [[0] * n for _ in range(n)]
                for i, j in _parity_pairs(values, metric):
                    column[i][j] = column[j][i] = 1
            else:
                if metric is None:
                    column = [[Fraction(0)] * n for _ in range(n)]
                    for (i, j), t in _merge_values([Fraction(v) for v in values]).items():
                        column[i][j] += t
                        column[j][i] -= t
                else:
                    column = flow_matrix(metric, [Fraction(v) for v in values])
                if f.kind is FactorKind.Z:
                    column = [[int(v) for v in row] for row in column]
            columns.append(column)
    entries = tuple(
        tuple(tuple(columns[k][i][j] for k in range(r)) for j in range(n)) for i in range(n)
    )
    cost = plan_cost(group, entries, metric) if metric is not None else None
    return TransportPlan(group, entries, cost, "construct")


def search_nbp(
    group: GroupSpec,
    coeffs: Sequence[GroupElement],
    acyclic: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> Union[TransportPlan, ProofOfAbsence]:
    """
    Exhaustive depth-first search for a nonbranching plan over a finite group.

    Entries are assigned row by row; the last column follows from the row sums and a
    branch is cut as soon as some row spreads more norm than |g_i|.

    Args:
        group (GroupSpec): A finite group.
        coeffs (Sequence[GroupElement]): Coefficients summing to zero.
        acyclic (bool): Only accept plans whose support graph is a forest.
        budget (int): Maximum number of search nodes.

    Returns:
        Union[TransportPlan, ProofOfAbsence]: The first plan found, or the exhaustion record.
    """
    coeffs = tuple(coeffs)
    elements = enumerate_elements(group)
    if not is_zero(group, sum_elements(group, coeffs)):
        raise NonZeroSum("Coefficients do not sum to zero")
    n = len(coeffs)
    norms = {x: norm(group, x) for x in elements}
    target = [norms[g] for g in coeffs]
    z = zero(group)
    entries = [[z] * n for _ in range(n)]
    load = [Fraction(0)] * n
    visited = 0

    def place(i: int, j: int, g: GroupElement, w: Scalar) -> None:
        entries[i][j], entries[j][i] = g, neg(group, g)
        load[i] += w
        load[j] += w

    def unplace(i: int, j: int, w: Scalar) -> None:
        entries[i][j] = entries[j][i] = z
        load[i] -= w
        load[j] -= w

    def leaf() -> Optional[TransportPlan]:
        if n and load[n - 1] != target[n - 1]:
            return None
        plan = TransportPlan(group, tuple(tuple(row) for row in entries), None, "search")
        if acyclic and not is_acyclic(plan)[0]:
            return None
        return plan

    def visit(i: int, j: int) -> Optional[TransportPlan]:
        nonlocal visited
        visited += 1
        if visited > budget:
            raise BudgetExceeded(
                f"Nonbranching search exceeded {budget} nodes", {"budget": budget, "coeffs": coeffs}
            )
        if i >= n - 1:
            return leaf()
        if j < n - 1:
            for g in elements:
                w = norms[g]
                if load[i] + w > target[i] or load[j] + w > target[j]:
                    continue
                place(i, j, g, w)
                found = visit(i, j + 1)
                unplace(i, j, w)
                if found is not None:
                    return found
            return None
        rest = z
        for k in range(n - 1):
            if k != i:
                rest = add(group, rest, entries[i][k])
        last = sub(group, coeffs[i], rest)
        w = norms[last]
        if load[i] + w != target[i] or load[n - 1] + w > target[n - 1]:
            return None
        place(i, n - 1, last, w)
        found = visit(i + 1, i + 2)
        unplace(i, n - 1, w)
        return found

    found = visit(0, 1)
    if found is not None:
        logger.debug(f"Nonbranching plan for {coeffs} found after {visited} nodes")
        return found
    space = len(elements) ** ((n - 1) * (n - 2) // 2)
    logger.debug(f"No nonbranching plan for {coeffs}: {visited} nodes, space {space}")
    return ProofOfAbsence(coeffs, space, visited, acyclic)


def _zero_sum_multisets(group: GroupSpec, size: int) -> List[Tuple[GroupElement, ...]]:
    nonzero = [x for x in enumerate_elements(group) if not is_zero(group, x)]
    return [
        combo
        for combo in combinations_with_replacement(nonzero, size)
        if is_zero(group, sum_elements(group, combo))
    ]


def find_nbp_counterexample(
    group: GroupSpec, n_max: int = DEFAULT_N_MAX, budget: int = DEFAULT_BUDGET
) -> Optional[Counterexample]:
    """
    Search coefficient multisets of size <= n_max for one without a nonbranching plan.

    The pattern g, ..., g, -ng over indecomposable g is tried first, then every
    zero-sum multiset of nonzero elements by increasing size.

    Args:
        group (GroupSpec): A finite group.
        n_max (int): Largest number of points.
        budget (int): Node budget per search.

    Returns:
        Optional[Counterexample]: The first refuted multiset, or None.
    """
    if is_constructible(group):
        logger.info(f"{group.label} has constructive nonbranching plans: nothing to refute")
        return None
    candidates: List[Tuple[GroupElement, ...]] = []
    for g in list_indecomposables(group, budget=budget).representatives:
        for n in range(1, n_max):
            candidates.append((g,) * n + (multiple(group, -n, g),))
    for size in range(2, n_max + 1):
        candidates.extend(_zero_sum_multisets(group, size))
    tried: List[Tuple[GroupElement, ...]] = []
    seen = set()
    for coeffs in candidates:
        key = tuple(sorted(coeffs))
        if key in seen:
            continue
        seen.add(key)
        tried.append(coeffs)
        outcome = search_nbp(group, coeffs, budget=budget)
        if isinstance(outcome, ProofOfAbsence):
            logger.info(f"{group.label} refuted by coefficients {coeffs}")
            return Counterexample(coeffs, outcome, tuple(tried))
    logger.info(f"No refutation for {group.label} among {len(tried)} multisets up to size {n_max}")
    return None


def polytope_norm(vertices: Sequence[Sequence]) -> PolytopeNorm:
    """
    Validate a centrally symmetric, full-dimensional vertex list as a unit ball.

    Args:
        vertices (Sequence[Sequence]): Rational vertices.

    Returns:
        PolytopeNorm: The ball.
    """
    verts = tuple(tuple(Fraction(v) for v in vertex) for vertex in vertices)
    if not verts or len({len(v) for v in verts}) != 1:
        raise ShapeMismatch("Vertices must be a nonempty list of equal-length vectors")
    vset = set(verts)
    for v in verts:
        if tuple(-a for a in v) not in vset:
            raise ShapeMismatch(f"Vertex set is not symmetric: -{v} missing", {"vertex": v})
    if rank(verts) != len(verts[0]):
        raise ShapeMismatch("Polytope is not full-dimensional")
    return PolytopeNorm(verts)


def gauge(ball: PolytopeNorm, y: Sequence) -> Scalar:
    """
    Minkowski gauge min { sum mu_k : sum mu_k v_k = y, mu >= 0 } by exact linear programming.
    """
    y = [Fraction(v) for v in y]
    A_eq = [[v[r] for v in ball.vertices] for r in range(ball.dim)]
    result = linprog_exact([Fraction(1)] * len(ball.vertices), A_eq=A_eq, b_eq=y)
    if result.status != OPTIMAL:
        raise ShapeMismatch(f"Gauge of {y} is undefined ({result.status})")
    return result.value


def _is_extreme(ball: PolytopeNorm, p: Tuple[Scalar, ...]) -> bool:
    others = [v for v in ball.vertices if v != p]
    if not others:
        return True
    A_eq = [[v[r] for v in others] for r in range(ball.dim)] + [[Fraction(1)] * len(others)]
    b_eq = list(p) + [Fraction(1)]
    return linprog_exact([Fraction(0)] * len(others), A_eq=A_eq, b_eq=b_eq).status != OPTIMAL


def check_l1_extreme_condition(
    ball: PolytopeNorm, pts: Sequence[Sequence], lambdas: Sequence
) -> ExtremeConditionReport:
    """
    Test ||sum lambda_i p_i|| = sum |lambda_i| ||p_i|| for independent extreme points of the ball.

    A strict inequality is a witness that the normed space lacks nonbranching plans.

    Args:
        ball (PolytopeNorm): Unit ball of the norm.
        pts (Sequence[Sequence]): Extreme points p_i.
        lambdas (Sequence): Nonzero rational coefficients.

    Returns:
        ExtremeConditionReport: Gauge of the combination against the l1 bound.
    """
    points = [tuple(Fraction(v) for v in p) for p in pts]
    lams = tuple(Fraction(v) for v in lambdas)
    if len(points) != len(lams) or any(len(p) != ball.dim for p in points):
        raise ShapeMismatch("Points and coefficients do not match the ball")
    if any(lam == 0 for lam in lams):
        raise ShapeMismatch("Coefficients must be nonzero")
    for p in points:
        if p not in set(ball.vertices) or not _is_extreme(ball, p):
            raise NotExtreme(f"{p} is not an extreme point of the ball", {"point": p})
    if rank(points) != len(points):
        raise DependentPoints("Points are linearly dependent")
    y = tuple(
        sum((lam * p[r] for lam, p in zip(lams, points)), Fraction(0)) for r in range(ball.dim)
    )
    value = gauge(ball, y)
    bound = sum((abs(lam) * gauge(ball, p) for lam, p in zip(lams, points)), Fraction(0))
    if value == bound:
        return ExtremeConditionReport(True, y, value, bound)
    return ExtremeConditionReport(
        False, y, value, bound, {"combination": y, "gauge": value, "bound": bound}
    )
