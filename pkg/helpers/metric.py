from fractions import Fraction
from itertools import combinations
from typing import Any, List, Sequence
import networkx as nx
from helpers.group import check_element, is_zero, project_element, sum_elements
from helpers.logger import Logger
from models.enums import PointNorm
from models.errors import (
    AsymmetricMatrix,
    DuplicatePoint,
    NegativeDistance,
    NonZeroSum,
    ShapeMismatch,
    TriangleViolation,
    ZeroOffDiagonal,
)
from models.group import GroupElement, GroupSpec, Scalar
from models.metric import FiniteMetric, Instance

logger = Logger("metric")


def metric_from_matrix(d: Sequence[Sequence[Any]], provenance: str = "matrix") -> FiniteMetric:
    """
    Validate a distance matrix and wrap it as a FiniteMetric.

    Args:
        d (Sequence[Sequence[Any]]): Square matrix of rationals (Fraction, int or "p/q" strings).
        provenance (str): Tag recording how the matrix was obtained.

    Returns:
        FiniteMetric: The validated metric.
    """
    n = len(d)
    if any(len(row) != n for row in d):
        raise ShapeMismatch("Distance matrix is not square")
    m = tuple(tuple(Fraction(v) for v in row) for row in d)
    for i in range(n):
        if m[i][i] != 0:
            raise ShapeMismatch(f"d({i},{i}) = {m[i][i]} is not zero", {"i": i})
        for j in range(n):
            if m[i][j] != m[j][i]:
                raise AsymmetricMatrix(
                    f"d({i},{j}) = {m[i][j]} differs from d({j},{i}) = {m[j][i]}",
                    {"i": i, "j": j},
                )
            if m[i][j] < 0:
                raise NegativeDistance(f"d({i},{j}) = {m[i][j]} is negative", {"i": i, "j": j})
            if i != j and m[i][j] == 0:
                raise ZeroOffDiagonal(f"d({i},{j}) is zero", {"i": i, "j": j})
    for i in range(n):
        for k in range(n):
            for j in range(n):
                if m[i][k] > m[i][j] + m[j][k]:
                    raise TriangleViolation(
                        f"d({i},{k}) = {m[i][k]} exceeds d({i},{j}) + d({j},{k}) = {m[i][j] + m[j][k]}",
                        {"i": i, "j": k, "k": j},
                    )
    return FiniteMetric(m, provenance)


def metric_from_points(coords: Sequence[Sequence[Any]], p: PointNorm = PointNorm.L1) -> FiniteMetric:
    """
    Pairwise distances of a rational point cloud under the l1 or sup norm.

    Args:
        coords (Sequence[Sequence[Any]]): Points of equal dimension.
        p (PointNorm): Which norm measures the gaps.

    Returns:
        FiniteMetric: The distance matrix.
    """
    points = [tuple(Fraction(c) for c in pt) for pt in coords]
    if len({len(pt) for pt in points}) > 1:
        raise ShapeMismatch("Points have different dimensions")
    n = len(points)
    d = [[Fraction(0)] * n for _ in range(n)]
    for i, j in combinations(range(n), 2):
        gaps = [abs(a - b) for a, b in zip(points[i], points[j])]
        dist = sum(gaps, Fraction(0)) if p is PointNorm.L1 else max(gaps, default=Fraction(0))
        if dist == 0:
            raise DuplicatePoint(f"Points {i} and {j} coincide", {"i": i, "j": j})
        d[i][j] = d[j][i] = dist
    return metric_from_matrix(d, provenance=f"points:{p.value}")


def shortest_path_closure(weights: Sequence[Sequence[Any]]) -> List[List[Fraction]]:
    """
    All-pairs shortest path lengths of the complete graph with the given edge lengths.

    Args:
        weights (Sequence[Sequence[Any]]): Symmetric matrix of positive rational edge lengths.

    Returns:
        List[List[Fraction]]: Floyd-Warshall distances, exact.
    """
    n = len(weights)
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_weighted_edges_from((i, j, Fraction(weights[i][j])) for i, j in combinations(range(n), 2))
    lengths = nx.floyd_warshall(graph)
    return [[Fraction(lengths[i][j]) for j in range(n)] for i in range(n)]


def complete_graph_metric(metric: FiniteMetric) -> FiniteMetric:
    """
    Geodesic metric of the complete graph on the points with edge lengths d.

    Args:
        metric (FiniteMetric): The vertex metric.

    Returns:
        FiniteMetric: The shortest path closure; it equals d whenever d obeys the triangle inequality.
    """
    closure = shortest_path_closure(metric.d)
    shortened = [(i, j) for i, j in combinations(range(metric.n), 2) if closure[i][j] != metric.d[i][j]]
    if shortened:
        logger.warning(f"Shortest paths shorten {len(shortened)} direct edges, first {shortened[0]}")
    return metric_from_matrix(closure, provenance=f"complete-graph({metric.provenance})")


def scale_metric(metric: FiniteMetric, t: Scalar) -> FiniteMetric:
    if t <= 0:
        raise ShapeMismatch(f"Scale factor must be positive, got {t}")
    return FiniteMetric(tuple(tuple(t * v for v in row) for row in metric.d), metric.provenance)


def make_instance(
    metric: FiniteMetric, group: GroupSpec, coeffs: Sequence[GroupElement]
) -> Instance:
    """
    Attach one coefficient per point and check that they sum to zero.

    Args:
        metric (FiniteMetric): The points.
        group (GroupSpec): Coefficient group.
        coeffs (Sequence[GroupElement]): One element per point.

    Returns:
        Instance: The transport instance.
    """
    coeffs = tuple(coeffs)
    if len(coeffs) != metric.n:
        raise ShapeMismatch(f"{len(coeffs)} coefficients for {metric.n} points")
    for g in coeffs:
        check_element(group, g)
    total = sum_elements(group, coeffs)
    if not is_zero(group, total):
        raise NonZeroSum(f"Coefficients sum to {total}, not zero", {"sum": total})
    return Instance(metric, group, coeffs)


def project(inst: Instance, k: int) -> Instance:
    """
    The instance seen through factor k only.
    """
    return Instance(
        inst.metric,
        inst.group.factor_group(k),
        tuple(project_element(g, k) for g in inst.coeffs),
    )
