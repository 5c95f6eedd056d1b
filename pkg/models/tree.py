from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Optional, Tuple
import networkx as nx
from models.group import Scalar

TreeMap = Tuple[int, ...]


@dataclass(frozen=True)
class Tree:
    """
    Finite geodesic tree on integer vertices with positive rational edge lengths.

    Args:
        vertices (Tuple[int, ...]): Vertex labels.
        edges (Tuple[Tuple[int, int, Scalar], ...]): (u, v, length) triples.
        root (int): Vertex used when the tree is glued into a star.
    """

    vertices: Tuple[int, ...]
    edges: Tuple[Tuple[int, int, Scalar], ...]
    root: int = 0

    @cached_property
    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        for u, v, length in self.edges:
            g.add_edge(u, v, length=length)
        return g

    @cached_property
    def _distances(self) -> Dict[int, Dict[int, Scalar]]:
        return dict(nx.all_pairs_dijkstra_path_length(self.graph, weight="length"))

    def distance(self, u: int, v: int) -> Scalar:
        return self._distances[u][v]

    def length(self, u: int, v: int) -> Scalar:
        return self.graph.edges[u, v]["length"]


@dataclass(frozen=True)
class DualPotential:
    """
    1-Lipschitz potential f(x_i) for one Z or R factor and the dual value sum g_i f(x_i).
    """

    values: Tuple[Scalar, ...]
    value: Scalar


@dataclass(frozen=True)
class LipschitzReport:
    ok: bool
    pair: Optional[Tuple[int, int]] = None
    tree_distance: Optional[Scalar] = None
    metric_distance: Optional[Scalar] = None


@dataclass(frozen=True)
class Certificate:
    """
    Calibration of one instance: per-factor potentials (Z and R factors), trees and maps,
    the lower bound they certify and its gap to the optimal cost.
    """

    potentials: Tuple[Optional[DualPotential], ...]
    trees: Tuple[Tree, ...]
    maps: Tuple[TreeMap, ...]
    value: Scalar
    cost: Scalar

    @property
    def gap(self) -> Scalar:
        return self.cost - self.value
