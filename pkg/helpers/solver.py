from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Set, Tuple
import networkx as nx
from constants import DEFAULT_BUDGET, MATCHING_CUTOFF
from helpers.group import (
    add,
    is_zero,
    neg,
    norm,
    require_rational_norm,
    sub,
    zero,
    _enumerate_factor,
)
from helpers.logger import Logger
from helpers.metric import project
from models.enums import FactorKind
from models.errors import (
    BudgetExceeded,
    InfiniteGroup,
    NonZeroSum,
    ShapeMismatch,
    UnsupportedFactor,
)
from models.group import GroupElement, GroupSpec, Scalar
from models.metric import FiniteMetric, Instance
from models.plan import TransportPlan

logger = Logger("solver")

Matrix = List[List[Fraction]]


def plan_cost(
    group: GroupSpec, entries: Sequence[Sequence[GroupElement]], metric: FiniteMetric
) -> Scalar:
    n = len(entries)
    return sum(
        (
            norm(group, entries[i][j]) * metric.dist(i, j)
            for i in range(n)
            for j in range(i + 1, n)
        ),
        Fraction(0),
    )


def cost(plan: TransportPlan, metric: FiniteMetric) -> Scalar:
    """
    Transport cost sum_{i<j} |g_ij| d(x_i, x_j) of a plan.

    Args:
        plan (TransportPlan): The plan.
        metric (FiniteMetric): The points it moves mass between.

    Returns:
        Scalar: The exact cost.
    """
    if plan.n != metric.n or any(len(row) != plan.n for row in plan.entries):
        raise ShapeMismatch(f"Plan of size {plan.n} does not fit {metric.n} points")
    return plan_cost(plan.group, plan.entries, metric)


def feasibility_defect(plan: TransportPlan, inst: Instance) -> Optional[Dict]:
    """
    First violated plan condition (antisymmetry, zero diagonal, row sums), or None.

    Args:
        plan (TransportPlan): The plan to check.
        inst (Instance): The instance it claims to solve.

    Returns:
        Optional[Dict]: Description of the defect.
    """
    group = inst.group
    if plan.n != inst.n:
        return {"condition": "shape", "plan_size": plan.n, "points": inst.n}
    for i in range(plan.n):
        if not is_zero(group, plan.entry(i, i)):
            return {"condition": "diagonal", "i": i, "g_ii": plan.entry(i, i)}
        for j in range(plan.n):
            if plan.entry(i, j) != neg(group, plan.entry(j, i)):
                return {"condition": "antisymmetry", "i": i, "j": j}
        row = zero(group)
        for j in range(plan.n):
            row = add(group, row, plan.entry(i, j))
        if row != inst.coeffs[i]:
            return {"condition": "row_sum", "i": i, "row_sum": row, "g_i": inst.coeffs[i]}
    return None


def _factor_candidates(group: GroupSpec, coeffs: Sequence[GroupElement]) -> List[GroupElement]:
    per_factor = []
    for k, f in enumerate(group.factors):
        if f.kind is FactorKind.ZMOD:
            per_factor.append(_enumerate_factor(f))
        elif f.kind is FactorKind.Z:
            bound = sum(abs(g[k]) for g in coeffs)
            per_factor.append(list(range(-bound, bound + 1)))
        else:
            raise InfiniteGroup(
                f"Brute force over {f.label} needs an explicit candidate set",
                {"factor": k},
            )
    return list(product(*per_factor))


def solve_brute(
    inst: Instance,
    candidates: Optional[Sequence[GroupElement]] = None,
    budget: int = DEFAULT_BUDGET,
) -> TransportPlan:
    """
    Exhaustive minimization over every plan whose entries lie in a candidate set.

    Entries g_ij with j < n-1 are enumerated; the last column follows from the row
    sums. Among optimal plans the lexicographically smallest flattened entry list wins.

    Args:
        inst (Instance): The transport instance.
        candidates (Sequence[GroupElement], optional): Entry values to try; defaults to all of G
            on finite factors and to [-sum|g_i|, sum|g_i|] on Z factors.
        budget (int): Maximum number of assignments to enumerate.

    Returns:
        TransportPlan: The optimal plan over the candidate grid.
    """
    group, n = inst.group, inst.n
    if not is_zero(group, _total(group, inst.coeffs)):
        raise NonZeroSum("Coefficients do not sum to zero")
    cands = list(candidates) if candidates is not None else _factor_candidates(group, inst.coeffs)
    allowed: Set[GroupElement] = set(cands)
    free = [(i, j) for i in range(n) for j in range(i + 1, n - 1)]
    space = len(cands) ** len(free)
    if space > budget:
        raise BudgetExceeded(
            f"Brute force needs {space} assignments, budget is {budget}",
            {"search_space": space, "budget": budget},
        )
    logger.debug(f"Brute force over {space} assignments for n={n} in {group.label}")
    norms: Dict[GroupElement, Scalar] = {}

    def cached_norm(g: GroupElement) -> Scalar:
        if g not in norms:
            norms[g] = norm(group, g)
        return norms[g]

    z = zero(group)
    best = None
    entries = [[z] * n for _ in range(n)]
    for assignment in product(cands, repeat=len(free)):
        for (i, j), g in zip(free, assignment):
            entries[i][j] = g
            entries[j][i] = neg(group, g)
        feasible = True
        for i in range(n - 1):
            rest = z
            for j in range(n - 1):
                if j != i:
                    rest = add(group, rest, entries[i][j])
            last = sub(group, inst.coeffs[i], rest)
            if last not in allowed:
                feasible = False
                break
            entries[i][n - 1] = last
            entries[n - 1][i] = neg(group, last)
        if not feasible:
            continue
        total = sum(
            (
                cached_norm(entries[i][j]) * inst.metric.dist(i, j)
                for i in range(n)
                for j in range(i + 1, n)
            ),
            Fraction(0),
        )
        key = (total, tuple(entries[i][j] for i in range(n) for j in range(i + 1, n)))
        if best is None or key < best[0]:
            best = (key, tuple(tuple(row) for row in entries))
    if best is None:
        raise BudgetExceeded(
            "No plan with entries in the candidate set satisfies the row sums",
            {"search_space": space},
        )
    return TransportPlan(group, best[1], best[0][0], "brute")


def _total(group: GroupSpec, coeffs: Sequence[GroupElement]) -> GroupElement:
    out = zero(group)
    for g in coeffs:
        out = add(group, out, g)
    return out


def _single_factor(inst: Instance, kinds: Tuple[FactorKind, ...]) -> None:
    if len(inst.group.factors) != 1 or inst.group.factors[0].kind not in kinds:
        raise UnsupportedFactor(
            f"Expected a single {'/'.join(k.value for k in kinds)} factor, got {inst.group.label}"
        )


def _bellman_ford(
    nodes: int, residual: Dict[Tuple[int, int], Fraction], arc_cost: Dict[Tuple[int, int], Fraction], s: int
) -> Tuple[List[Optional[Fraction]], List[Optional[int]]]:
    dist: List[Optional[Fraction]] = [None] * nodes
    parent: List[Optional[int]] = [None] * nodes
    dist[s] = Fraction(0)
    arcs = sorted(a for a, cap in residual.items() if cap > 0)
    for _ in range(nodes - 1):
        changed = False
        for u, v in arcs:
            if dist[u] is None:
                continue
            candidate = dist[u] + arc_cost[(u, v)]
            if dist[v] is None or candidate < dist[v]:
                dist[v], parent[v] = candidate, u
                changed = True
        if not changed:
            break
    return dist, parent


def flow_matrix(metric: FiniteMetric, values: Sequence[Fraction]) -> Matrix:
    """
    Optimal real transport plan by successive shortest paths from positive to negative sites.

    Args:
        metric (FiniteMetric): The points.
        values (Sequence[Fraction]): Coefficients summing to zero.

    Returns:
        Matrix: Antisymmetric g_ij with row sums equal to values; integral for integral values.
    """
    n = len(values)
    if sum(values, Fraction(0)) != 0:
        raise NonZeroSum(f"Values {values} do not sum to zero")
    s, t = n, n + 1
    residual: Dict[Tuple[int, int], Fraction] = {}
    arc_cost: Dict[Tuple[int, int], Fraction] = {}
    # uncapacitated transport arcs get a capacity no augmentation can reach
    infinite = sum((abs(v) for v in values), Fraction(0)) + 1

    def add_arc(u: int, v: int, cap: Fraction, c: Fraction) -> None:
        residual[(u, v)] = residual.get((u, v), Fraction(0)) + cap
        residual.setdefault((v, u), Fraction(0))
        arc_cost[(u, v)], arc_cost[(v, u)] = c, -c

    sources = [i for i in range(n) if values[i] > 0]
    sinks = [j for j in range(n) if values[j] < 0]
    for i in sources:
        add_arc(s, i, Fraction(values[i]), Fraction(0))
        for j in sinks:
            add_arc(i, j, infinite, metric.dist(i, j))
    for j in sinks:
        add_arc(j, t, Fraction(-values[j]), Fraction(0))
    augmentations = 0
    while True:
        dist, parent = _bellman_ford(n + 2, residual, arc_cost, s)
        if dist[t] is None:
            break
        path, v = [], t
        while v != s:
            path.append((parent[v], v))
            v = parent[v]
        push = min(residual[a] for a in path)
        for u, v in path:
            residual[(u, v)] -= push
            residual[(v, u)] += push
        augmentations += 1
    logger.debug(f"Min-cost flow finished after {augmentations} augmentations")
    g = [[Fraction(0)] * n for _ in range(n)]
    for i in sources:
        for j in sinks:
            moved = residual[(j, i)]
            g[i][j], g[j][i] = moved, -moved
    return cancel_cycles(metric, g)


def cancel_cycles(metric: FiniteMetric, g: Matrix) -> Matrix:
    """
    Push mass around support cycles until the support graph is a forest.

    Every push stops at the first entry reaching zero, so no entry changes sign,
    the cost never increases and |g_i| = sum_j |g_ij| is preserved.

    Args:
        metric (FiniteMetric): The points.
        g (Matrix): Antisymmetric single-coordinate plan.

    Returns:
        Matrix: A plan with forest support and cost at most the input cost.
    """
    g = [list(row) for row in g]
    n = len(g)
    while True:
        support = nx.Graph()
        support.add_nodes_from(range(n))
        support.add_edges_from((i, j) for i in range(n) for j in range(i + 1, n) if g[i][j] != 0)
        try:
            cycle = nx.find_cycle(support)
        except nx.NetworkXNoCycle:
            return g
        slope = sum(
            (metric.dist(u, v) * (1 if g[u][v] > 0 else -1) for u, v in cycle), Fraction(0)
        )
        direction = -1 if slope > 0 else 1
        step = min(abs(g[u][v]) for u, v in cycle if direction * g[u][v] < 0)
        for u, v in cycle:
            g[u][v] += direction * step
            g[v][u] -= direction * step


def _wrap_single(inst: Instance, matrix: Sequence[Sequence], method: str) -> TransportPlan:
    entries = tuple(tuple((v,) for v in row) for row in matrix)
    return TransportPlan(inst.group, entries, plan_cost(inst.group, entries, inst.metric), method)


def solve_flow(inst: Instance) -> TransportPlan:
    """
    Optimal plan for a single Z or R factor via exact min-cost flow.

    Args:
        inst (Instance): Instance over one Z or R factor.

    Returns:
        TransportPlan: An optimal plan with forest support.
    """
    _single_factor(inst, (FactorKind.Z, FactorKind.R))
    kind = inst.group.factors[0].kind
    values = [Fraction(g[0]) for g in inst.coeffs]
    g = flow_matrix(inst.metric, values)
    if kind is FactorKind.Z:
        g = [[int(v) for v in row] for row in g]
    return _wrap_single(inst, g, "flow")


def min_weight_matching(
    metric: FiniteMetric, odd: Sequence[int], cutoff: int = MATCHING_CUTOFF
) -> Tuple[Scalar, List[Tuple[int, int]]]:
    """
    Minimum-weight perfect matching of an even point set by dynamic programming over subsets.

    Args:
        metric (FiniteMetric): The points.
        odd (Sequence[int]): Indices to match.
        cutoff (int): Largest set size handled exactly.

    Returns:
        Tuple[Scalar, List[Tuple[int, int]]]: Matching cost and pairs (i < j).
    """
    odd = sorted(odd)
    if len(odd) % 2:
        raise NonZeroSum(f"Cannot pair an odd number ({len(odd)}) of points")
    if len(odd) > cutoff:
        raise BudgetExceeded(
            f"{len(odd)} odd points exceed the matching cutoff {cutoff}",
            {"odd_points": len(odd), "cutoff": cutoff},
        )
    memo: Dict[int, Tuple[Scalar, Tuple[Tuple[int, int], ...]]] = {0: (Fraction(0), ())}

    def best(mask: int) -> Tuple[Scalar, Tuple[Tuple[int, int], ...]]:
        if mask in memo:
            return memo[mask]
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        choice = None
        for j in range(i + 1, len(odd)):
            if rest >> j & 1:
                sub_cost, sub_pairs = best(rest & ~(1 << j))
                total = metric.dist(odd[i], odd[j]) + sub_cost
                if choice is None or total < choice[0]:
                    choice = (total, ((odd[i], odd[j]),) + sub_pairs)
        memo[mask] = choice
        return choice

    total, pairs = best((1 << len(odd)) - 1)
    return total, list(pairs)


def solve_parity(inst: Instance, cutoff: int = MATCHING_CUTOFF) -> TransportPlan:
    """
    Optimal plan for a single Z2 factor: a minimum-weight perfect matching of the points with coefficient 1.

    Args:
        inst (Instance): Instance over one Z2 factor.
        cutoff (int): Largest odd set handled.

    Returns:
        TransportPlan: The matching plan.
    """
    if len(inst.group.factors) != 1 or not inst.group.factors[0].is_parity:
        raise UnsupportedFactor(f"Expected a single Z2 factor, got {inst.group.label}")
    odd = [i for i, g in enumerate(inst.coeffs) if g[0] == 1]
    _, pairs = min_weight_matching(inst.metric, odd, cutoff)
    n = inst.n
    g = [[0] * n for _ in range(n)]
    for i, j in pairs:
        g[i][j] = g[j][i] = 1
    return _wrap_single(inst, g, "parity")


def combine(inst: Instance, plans: Sequence[TransportPlan], method: str = "decomposed") -> TransportPlan:
    """
    Recombine per-factor plans coordinate-wise into a plan over the product group.
    """
    n = inst.n
    entries = tuple(
        tuple(tuple(p.entries[i][j][0] for p in plans) for j in range(n)) for i in range(n)
    )
    return TransportPlan(inst.group, entries, sum((p.cost for p in plans), Fraction(0)), method)


def solve_factor(inst: Instance, budget: int = DEFAULT_BUDGET) -> TransportPlan:
    require_rational_norm(inst.group, "solve")
    f = inst.group.factors[0]
    if f.kind in (FactorKind.Z, FactorKind.R):
        return solve_flow(inst)
    if f.is_parity:
        return solve_parity(inst)
    return solve_brute(inst, budget=budget)


def solve(inst: Instance, budget: int = DEFAULT_BUDGET) -> TransportPlan:
    """
    Optimal plan by decomposing a weighted l1 product into its factors.

    Z and R factors go to solve_flow, Z2 factors to solve_parity and any other
    finite factor to solve_brute; the cost is the sum of the factor costs.

    Args:
        inst (Instance): The transport instance.
        budget (int): Node budget for brute-force factors.

    Returns:
        TransportPlan: A globally optimal plan.
    """
    plans = [solve_factor(project(inst, k), budget) for k in range(len(inst.group.factors))]
    if len(plans) == 1:
        return plans[0]
    plan = combine(inst, plans)
    logger.debug(
        f"Decomposed solve over {inst.group.label}: factor costs {[str(p.cost) for p in plans]}"
    )
    return plan


def solve_decomposed(inst: Instance, budget: int = DEFAULT_BUDGET) -> TransportPlan:
    """Per-factor solve, recombined even when there is a single factor."""
    plans = [solve_factor(project(inst, k), budget) for k in range(len(inst.group.factors))]
    return combine(inst, plans)
