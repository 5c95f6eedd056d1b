from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple
import networkx as nx
from helpers.chain import make_chain, mass
from helpers.group import add, embed_coordinate, is_zero, sum_elements, zero
from helpers.logger import Logger
from helpers.lp import OPTIMAL, linprog_exact
from helpers.metric import project
from helpers.nbp import check_nbp
from helpers.solver import min_weight_matching, solve
from models.chain import Chain0, PolyChain1
from models.enums import FactorKind
from models.errors import (
    LipschitzViolation,
    NonZeroSum,
    NotCalibrated,
    ShapeMismatch,
    UnsupportedFactor,
)
from models.group import GroupSpec, Scalar
from models.metric import FiniteMetric, Instance
from models.plan import NbpReport
from models.tree import Certificate, DualPotential, LipschitzReport, Tree, TreeMap

logger = Logger("calibration")

TreeCandidate = Tuple[Tree, TreeMap]


def make_tree(edges: Sequence[Tuple[int, int, Scalar]], root: int = 0, size: Optional[int] = None) -> Tree:
    """
    Validate a weighted tree on the vertices 0..m-1.

    Args:
        edges (Sequence): (u, v, length) triples with positive lengths.
        root (int): Root used for gluing.
        size (int, optional): Vertex count; inferred from the edges when omitted.

    Returns:
        Tree: The tree.
    """
    edges = tuple((int(u), int(v), Fraction(length)) for u, v, length in edges)
    m = size if size is not None else 1 + max([root] + [max(u, v) for u, v, _ in edges])
    if any(length <= 0 for _, _, length in edges):
        raise ShapeMismatch("Tree edges need positive lengths")
    tree = Tree(tuple(range(m)), edges, root)
    if not nx.is_tree(tree.graph) or tree.graph.number_of_nodes() != m:
        raise ShapeMismatch(f"Edges do not form a tree on {m} vertices")
    return tree


def kantorovich_dual(inst: Instance) -> DualPotential:
    """
    Optimal 1-Lipschitz potential of a single Z or R factor by exact linear programming.

    Maximizes sum g_i f(x_i) subject to |f(x_i) - f(x_j)| <= w d(x_i, x_j), with the
    last potential pinned to 0.

    Args:
        inst (Instance): Instance over one Z or R factor of weight w.

    Returns:
        DualPotential: Potentials and the dual value, equal to the optimal transport cost.
    """
    if len(inst.group.factors) != 1 or inst.group.factors[0].kind not in (FactorKind.Z, FactorKind.R):
        raise UnsupportedFactor(f"Kantorovich duality needs a single Z or R factor, got {inst.group.label}")
    values = [Fraction(g[0]) for g in inst.coeffs]
    if sum(values, Fraction(0)) != 0:
        raise NonZeroSum(f"Coefficients {values} do not sum to zero")
    n = inst.n
    if n == 0:
        return DualPotential((), Fraction(0))
    weight = inst.group.factors[0].weight
    A_ub, b_ub = [], []
    for i in range(n):
        for j in range(n):
            if i != j:
                row = [Fraction(0)] * n
                row[i], row[j] = Fraction(1), Fraction(-1)
                A_ub.append(row)
                b_ub.append(weight * inst.metric.dist(i, j))
    pin = [Fraction(0)] * n
    pin[n - 1] = Fraction(1)
    result = linprog_exact(values, A_ub, b_ub, [pin], [Fraction(0)], free=True, maximize=True)
    if result.status != OPTIMAL:
        raise ShapeMismatch(f"Dual program is {result.status}")
    logger.debug(f"Kantorovich dual value {result.value} with potentials {result.x}")
    return DualPotential(tuple(result.x), result.value)


def tree_metric(tree: Tree) -> FiniteMetric:
    m = len(tree.vertices)
    return FiniteMetric(
        tuple(tuple(tree.distance(u, v) for v in range(m)) for u in range(m)), provenance="tree"
    )


def tree_fill(tree: Tree, chain: Chain0, group: GroupSpec) -> Tuple[PolyChain1, Scalar]:
    """
    The unique filling of a zero-sum 0-chain in a tree, by leaf peeling.

    Args:
        tree (Tree): The tree.
        chain (Chain0): Coefficients on tree vertices.
        group (GroupSpec): Coefficient group.

    Returns:
        Tuple[PolyChain1, Scalar]: The filling on the tree path metric and its mass.
    """
    if any(v not in tree.graph for v in chain.values):
        raise ShapeMismatch("Chain is supported outside the tree")
    if not is_zero(group, sum_elements(group, list(chain.values.values()))):
        raise NonZeroSum("Chain coefficients do not sum to zero")
    graph = tree.graph.copy()
    need = {v: chain.values.get(v, zero(group)) for v in graph.nodes}
    edges = []
    while graph.number_of_nodes() > 1:
        leaf = min(v for v in graph.nodes if graph.degree(v) <= 1)
        parent = next(iter(graph.neighbors(leaf)))
        c = need.pop(leaf)
        edges.append((parent, leaf, c))
        need[parent] = add(group, need[parent], c)
        graph.remove_node(leaf)
    fill = make_chain(tree_metric(tree), group, tree.vertices, edges)
    return fill, mass(fill)


def verify_tree_map(metric: FiniteMetric, tree: Tree, tmap: TreeMap) -> LipschitzReport:
    """
    Exact check of d_T(f(x_i), f(x_j)) <= d(x_i, x_j) over every pair.
    """
    if len(tmap) != metric.n or any(v not in tree.graph for v in tmap):
        raise ShapeMismatch("Map does not send every point to a tree vertex")
    for i in range(metric.n):
        for j in range(i + 1, metric.n):
            dt = tree.distance(tmap[i], tmap[j])
            if dt > metric.dist(i, j):
                return LipschitzReport(False, (i, j), dt, metric.dist(i, j))
    return LipschitzReport(True)


def push_forward(inst: Instance, tmap: TreeMap, k: int) -> Chain0:
    """
    Image of factor k of the instance under a tree map, as a 0-chain over that factor.
    """
    factor = inst.group.factor_group(k)
    values: Dict[int, tuple] = {}
    for i, g in enumerate(inst.coeffs):
        target = tmap[i]
        values[target] = add(factor, values.get(target, zero(factor)), (g[k],))
    return Chain0(factor, {v: g for v, g in sorted(values.items()) if not is_zero(factor, g)})


def star_glue(trees: Sequence[Tree], separation: Scalar) -> Tuple[Tree, List[Dict[int, int]]]:
    """
    Join the roots of several trees to a new hub vertex 0 by edges of the given length.

    Args:
        trees (Sequence[Tree]): Trees to glue.
        separation (Scalar): Length of the hub edges.

    Returns:
        Tuple[Tree, List[Dict[int, int]]]: The glued tree and the relabelling of each input tree.
    """
    separation = Fraction(separation)
    if separation <= 0:
        raise ShapeMismatch(f"Separation must be positive, got {separation}")
    edges, labels, offset = [], [], 1
    for tree in trees:
        relabel = {v: v + offset for v in tree.vertices}
        edges.extend((relabel[u], relabel[v], length) for u, v, length in tree.edges)
        edges.append((0, relabel[tree.root], separation))
        labels.append(relabel)
        offset += len(tree.vertices)
    return make_tree(edges, root=0, size=offset), labels


def _require_lipschitz(metric: FiniteMetric, tree: Tree, tmap: TreeMap, k: int) -> None:
    report = verify_tree_map(metric, tree, tmap)
    if not report.ok:
        raise LipschitzViolation(
            f"Map of factor {k} stretches pair {report.pair}: {report.tree_distance} > {report.metric_distance}",
            {"factor": k, "pair": report.pair, "tree": report.tree_distance, "metric": report.metric_distance},
        )


def calibration_value(
    inst: Instance, candidates: Sequence[TreeCandidate], separation: Optional[Scalar] = None
) -> Scalar:
    """
    Lower bound on the optimal cost certified by one 1-Lipschitz tree map per factor.

    Each factor is pushed into its own tree; with several factors the trees are glued to
    a star and the combined image is filled on the glued tree.

    Args:
        inst (Instance): The instance.
        candidates (Sequence[TreeCandidate]): (tree, map) for every factor, in factor order.
        separation (Scalar, optional): Hub edge length; defaults to the metric diameter (at least 1).

    Returns:
        Scalar: The filling mass, never above the optimal cost.
    """
    r = len(inst.group.factors)
    if len(candidates) != r:
        raise ShapeMismatch(f"{len(candidates)} tree maps for {r} factors")
    for k, (tree, tmap) in enumerate(candidates):
        _require_lipschitz(inst.metric, tree, tmap, k)
    if r == 1:
        tree, tmap = candidates[0]
        return tree_fill(tree, push_forward(inst, tmap, 0), inst.group)[1]
    if separation is None:
        diameter = max((v for row in inst.metric.d for v in row), default=Fraction(0))
        separation = max(Fraction(1), diameter)
    glued, labels = star_glue([tree for tree, _ in candidates], separation)
    values: Dict[int, tuple] = {}
    for k, (_, tmap) in enumerate(candidates):
        for v, g in push_forward(inst, tmap, k).values.items():
            target = labels[k][v]
            values[target] = add(
                inst.group, values.get(target, zero(inst.group)), embed_coordinate(inst.group, k, g[0])
            )
    return tree_fill(glued, Chain0(inst.group, values), inst.group)[1]


def interval_tree(potential: DualPotential, weight: Scalar = Fraction(1)) -> TreeCandidate:
    """
    The interval spanned by potential values (scaled by 1/weight) as a path tree, with each point mapped to its value.
    """
    scaled = [Fraction(v) / weight for v in potential.values]
    levels = sorted(set(scaled))
    index = {v: k for k, v in enumerate(levels)}
    edges = [(k, k + 1, levels[k + 1] - levels[k]) for k in range(len(levels) - 1)]
    return make_tree(edges, root=0, size=max(1, len(levels))), tuple(index[v] for v in scaled)


def matching_tree(metric: FiniteMetric, pairs: Sequence[Tuple[int, int]]) -> TreeCandidate:
    """
    Tree for a Z2 matching: each pair hangs from its midpoint, every midpoint joins a hub
    by a common leg, and unmatched points sit on the hub.

    The leg is the largest length keeping the map 1-Lipschitz; at length zero the
    pairs hang from the hub directly.

    Args:
        metric (FiniteMetric): The points.
        pairs (Sequence[Tuple[int, int]]): Disjoint pairs.

    Returns:
        TreeCandidate: The tree (hub 0) and the map.
    """
    half = {p: metric.dist(*p) / 2 for p in pairs}
    pair_of = {v: p for p in pairs for v in p}
    bounds = []
    for i in range(metric.n):
        for j in range(i + 1, metric.n):
            pi, pj = pair_of.get(i), pair_of.get(j)
            if pi is not None and pi == pj:
                continue
            reach = (half[pi] if pi else 0) + (half[pj] if pj else 0)
            legs = (1 if pi else 0) + (1 if pj else 0)
            if legs:
                bounds.append((metric.dist(i, j) - reach) / legs)
    leg = min(bounds, default=Fraction(1))
    if leg < 0:
        raise LipschitzViolation(f"No hub leg keeps the matching tree 1-Lipschitz ({leg})", {"leg": leg})
    edges, tmap = [], [0] * metric.n
    if leg == 0:
        # pairs hang from the hub itself
        for k, (a, b) in enumerate(pairs):
            edges += [(0, 2 * k + 1, half[(a, b)]), (0, 2 * k + 2, half[(a, b)])]
            tmap[a], tmap[b] = 2 * k + 1, 2 * k + 2
        return make_tree(edges, root=0, size=2 * len(pairs) + 1), tuple(tmap)
    for k, (a, b) in enumerate(pairs):
        mid, va, vb = 3 * k + 1, 3 * k + 2, 3 * k + 3
        edges += [(0, mid, leg), (mid, va, half[(a, b)]), (mid, vb, half[(a, b)])]
        tmap[a], tmap[b] = va, vb
    return make_tree(edges, root=0, size=3 * len(pairs) + 1), tuple(tmap)


def certify(inst: Instance) -> Certificate:
    """
    Build candidate calibrations factor by factor: interval trees from Kantorovich potentials
    on Z and R factors and matching trees on Z2 factors.

    Args:
        inst (Instance): The instance.

    Returns:
        Certificate: The candidates, their value and the optimal cost.
    """
    potentials, candidates = [], []
    for k, f in enumerate(inst.group.factors):
        sub = project(inst, k)
        if f.kind in (FactorKind.Z, FactorKind.R):
            potential = kantorovich_dual(sub)
            potentials.append(potential)
            candidates.append(interval_tree(potential, f.weight))
        elif f.is_parity:
            potentials.append(None)
            _, pairs = min_weight_matching(inst.metric, [i for i, g in enumerate(sub.coeffs) if g[0] == 1])
            candidates.append(matching_tree(inst.metric, pairs))
        else:
            raise UnsupportedFactor(f"No calibration candidates for factor {f.label}", {"factor": k})
    value = calibration_value(inst, candidates)
    cost = solve(inst).cost
    logger.info(f"Calibration value {value}, optimal cost {cost}")
    return Certificate(
        tuple(potentials),
        tuple(t for t, _ in candidates),
        tuple(m for _, m in candidates),
        value,
        cost,
    )


def converse_check(inst: Instance, candidates: Sequence[TreeCandidate]) -> NbpReport:
    """
    When a calibration is tight, the optimal plan must be nonbranching; check that it is.

    Args:
        inst (Instance): The instance.
        candidates (Sequence[TreeCandidate]): (tree, map) per factor.

    Returns:
        NbpReport: The nonbranching report of the optimal plan.
    """
    value = calibration_value(inst, candidates)
    plan = solve(inst)
    if value != plan.cost:
        raise NotCalibrated(
            f"Calibration value {value} is below the optimal cost {plan.cost}",
            {"value": value, "cost": plan.cost},
        )
    return check_nbp(plan, inst)
