from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple
from helpers.group import add, check_element, is_zero, neg, norm, require_rational_norm, sum_elements, zero
from helpers.logger import Logger
from helpers.metric import make_instance
from helpers.nbp import construct_nbp, is_constructible, search_nbp, violated_rows
from helpers.solver import feasibility_defect
from models.chain import Chain0, Edge, PolyChain1, SimplifyStep
from models.errors import (
    InternalCheckFailed,
    NoNbpPlanForStar,
    PlanMismatch,
    PlanNotNBP,
    ShapeMismatch,
    UnsupportedFactor,
    VertexOnBoundary,
)
from models.group import GroupElement, GroupSpec, Scalar
from models.metric import FiniteMetric, Instance
from models.plan import ProofOfAbsence, TransportPlan

logger = Logger("chain")


def _merge(group: GroupSpec, edges: Iterable[Tuple[int, int, GroupElement]]) -> Tuple[Edge, ...]:
    merged: Dict[Tuple[int, int], GroupElement] = {}
    for u, w, c in edges:
        if u == w:
            raise ShapeMismatch(f"Edge ({u}, {w}) has equal endpoints")
        if u > w:
            u, w, c = w, u, neg(group, c)
        merged[(u, w)] = add(group, merged.get((u, w), zero(group)), c)
    return tuple(
        (u, w, c) for (u, w), c in sorted(merged.items()) if not is_zero(group, c)
    )


def make_chain(
    metric: FiniteMetric,
    group: GroupSpec,
    boundary_set: Iterable[int],
    edges: Iterable[Tuple[int, int, GroupElement]],
) -> PolyChain1:
    """
    Canonical polyhedral chain: edges flipped to u < w, parallel edges summed, zero edges dropped.

    Args:
        metric (FiniteMetric): Vertex metric.
        group (GroupSpec): Coefficient group.
        boundary_set (Iterable[int]): The designated set B.
        edges (Iterable): (u, w, coefficient) triples oriented from u to w.

    Returns:
        PolyChain1: The chain.
    """
    require_rational_norm(group, "make_chain")
    edges = list(edges)
    for u, w, c in edges:
        if not (0 <= u < metric.n and 0 <= w < metric.n):
            raise ShapeMismatch(f"Edge ({u}, {w}) leaves the {metric.n} vertices")
        check_element(group, c)
    bset = frozenset(boundary_set)
    if any(not 0 <= b < metric.n for b in bset):
        raise ShapeMismatch("Boundary set leaves the vertex range")
    return PolyChain1(metric, group, bset, _merge(group, edges))


def boundary(S: PolyChain1) -> Chain0:
    """
    Boundary of a chain: +c at the head and -c at the tail of every edge.
    """
    values: Dict[int, GroupElement] = {}
    for u, w, c in S.edges:
        values[w] = add(S.group, values.get(w, zero(S.group)), c)
        values[u] = add(S.group, values.get(u, zero(S.group)), neg(S.group, c))
    return Chain0(S.group, {v: g for v, g in sorted(values.items()) if not is_zero(S.group, g)})


def mass(S: PolyChain1) -> Scalar:
    return sum((norm(S.group, c) * S.metric.dist(u, w) for u, w, c in S.edges), Fraction(0))


def star(S: PolyChain1, v: int) -> List[Tuple[int, GroupElement]]:
    """
    Neighbors of v with the coefficient a_i of the edge oriented from v to v_i.
    """
    out = []
    for u, w, c in S.edges_at(v):
        out.append((w, c) if u == v else (u, neg(S.group, c)))
    return sorted(out)


def sub_metric(metric: FiniteMetric, points: Sequence[int]) -> FiniteMetric:
    return FiniteMetric(
        tuple(tuple(metric.dist(a, b) for b in points) for a in points), provenance="star"
    )


def eliminate_vertex(S: PolyChain1, v: int, plan: TransportPlan) -> PolyChain1:
    """
    Replace the star at an interior vertex by the edges of a nonbranching plan between its neighbors.

    The plan entry a_ij becomes an edge from v_j to v_i; the boundary is unchanged
    and, by the triangle inequality, the mass does not increase.

    Args:
        S (PolyChain1): The chain.
        v (int): A vertex outside the boundary set.
        plan (TransportPlan): Nonbranching plan for the star coefficients, neighbors in ascending order.

    Returns:
        PolyChain1: The chain without v.
    """
    if v in S.boundary_set:
        raise VertexOnBoundary(f"Vertex {v} belongs to the boundary set", {"vertex": v})
    arms = star(S, v)
    if not arms:
        return S
    neighbors = [u for u, _ in arms]
    coeffs = tuple(a for _, a in arms)
    deficit = sum_elements(S.group, coeffs)
    if not is_zero(S.group, deficit):
        raise VertexOnBoundary(
            f"Vertex {v} carries boundary {neg(S.group, deficit)}", {"vertex": v, "deficit": deficit}
        )
    star_inst = Instance(sub_metric(S.metric, neighbors), S.group, coeffs)
    if plan.n != len(neighbors):
        raise PlanMismatch(f"Plan has {plan.n} rows for {len(neighbors)} neighbors")
    defect = feasibility_defect(plan, star_inst)
    if defect is not None:
        raise PlanMismatch(f"Plan does not route the star at {v}", defect)
    violated = violated_rows(S.group, plan.entries, coeffs)
    if violated:
        raise PlanNotNBP(f"Plan for the star at {v} is branching", {"rows": list(violated)})
    kept = [e for e in S.edges if v not in (e[0], e[1])]
    replacement = [
        (neighbors[j], neighbors[i], plan.entry(i, j))
        for i in range(len(neighbors))
        for j in range(i + 1, len(neighbors))
    ]
    return PolyChain1(S.metric, S.group, S.boundary_set, _merge(S.group, kept + replacement))


def star_plan(S: PolyChain1, v: int) -> TransportPlan:
    """
    A nonbranching plan for the star at v: constructed for Z, R and Z2 factors, searched otherwise.
    """
    arms = star(S, v)
    neighbors = [u for u, _ in arms]
    coeffs = tuple(a for _, a in arms)
    if is_constructible(S.group):
        return construct_nbp(S.group, coeffs, sub_metric(S.metric, neighbors))
    if not S.group.is_finite:
        raise UnsupportedFactor(f"No nonbranching plans available over {S.group.label}")
    outcome = search_nbp(S.group, coeffs)
    if isinstance(outcome, ProofOfAbsence):
        raise NoNbpPlanForStar(
            f"The star at vertex {v} admits no nonbranching plan",
            {"vertex": v, "coeffs": coeffs, "search_space": outcome.search_space},
        )
    return outcome


def simplify(S: PolyChain1) -> Tuple[PolyChain1, List[SimplifyStep]]:
    """
    Eliminate interior vertices, highest index first, until every edge joins two boundary vertices.

    Args:
        S (PolyChain1): A chain whose boundary lies in its boundary set.

    Returns:
        Tuple[PolyChain1, List[SimplifyStep]]: The simplified chain and one record per elimination.
    """
    outside = [v for v in boundary(S).values if v not in S.boundary_set]
    if outside:
        raise VertexOnBoundary(
            f"Boundary is supported outside the boundary set at {outside}", {"vertices": outside}
        )
    steps: List[SimplifyStep] = []
    current = S
    while current.interior:
        v = current.interior[-1]
        plan = star_plan(current, v)
        before = mass(current)
        arms = tuple(star(current, v))
        current = eliminate_vertex(current, v, plan)
        after = mass(current)
        if after > before:
            raise InternalCheckFailed(
                f"Mass increased from {before} to {after} eliminating vertex {v}",
                {"vertex": v, "mass_before": before, "mass_after": after},
            )
        logger.debug(f"Eliminated vertex {v}: mass {before} -> {after}")
        steps.append(SimplifyStep(v, arms, plan, before, after))
    logger.info(f"Simplified chain in {len(steps)} eliminations, mass {mass(S)} -> {mass(current)}")
    return current, steps


def chain_to_plan(S: PolyChain1) -> Tuple[Instance, TransportPlan]:
    """
    Read a chain supported on its boundary set as a transport plan between the boundary points.

    Args:
        S (PolyChain1): Chain whose edges all join boundary vertices.

    Returns:
        Tuple[Instance, TransportPlan]: Instance on the sorted boundary set and a plan whose cost is the mass.
    """
    points = sorted(S.boundary_set)
    position = {p: k for k, p in enumerate(points)}
    if any(u not in position or w not in position for u, w, _ in S.edges):
        raise ShapeMismatch("Chain has edges outside its boundary set")
    values = boundary(S).values
    inst = make_instance(
        sub_metric(S.metric, points), S.group, [values.get(p, zero(S.group)) for p in points]
    )
    z = zero(S.group)
    entries = [[z] * len(points) for _ in points]
    for u, w, c in S.edges:
        entries[position[w]][position[u]] = c
        entries[position[u]][position[w]] = neg(S.group, c)
    plan = TransportPlan(S.group, tuple(tuple(row) for row in entries), mass(S), "chain")
    return inst, plan
