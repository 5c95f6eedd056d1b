from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Optional, Tuple
from models.group import GroupElement, GroupSpec, Scalar
from models.metric import FiniteMetric
from models.plan import TransportPlan

# (u, w, coefficient) with u < w; the coefficient flows from u to w
Edge = Tuple[int, int, GroupElement]


@dataclass(frozen=True)
class PolyChain1:
    """
    Oriented, group weighted graph over the points of a finite metric.

    Edges are stored canonically (u < w, nonzero coefficient, one edge per pair);
    ``boundary_set`` is the designated set B of vertices allowed to carry boundary.
    """

    metric: FiniteMetric
    group: GroupSpec
    boundary_set: FrozenSet[int]
    edges: Tuple[Edge, ...] = ()

    @property
    def vertices(self) -> FrozenSet[int]:
        return frozenset(v for u, w, _ in self.edges for v in (u, w))

    @property
    def interior(self) -> Tuple[int, ...]:
        """Vertices carrying edges that are not in the boundary set, ascending."""
        return tuple(sorted(self.vertices - self.boundary_set))

    def edges_at(self, v: int) -> Tuple[Edge, ...]:
        return tuple(e for e in self.edges if v in (e[0], e[1]))


@dataclass(frozen=True)
class Chain0:
    """
    Finitely supported 0-chain: vertex -> nonzero group element.
    """

    group: GroupSpec
    values: Dict[int, GroupElement] = field(default_factory=dict)

    def support(self) -> Tuple[int, ...]:
        return tuple(sorted(self.values))


@dataclass(frozen=True)
class SimplifyStep:
    vertex: int
    star: Tuple[Tuple[int, GroupElement], ...]
    plan: Optional[TransportPlan]
    mass_before: Scalar
    mass_after: Scalar
