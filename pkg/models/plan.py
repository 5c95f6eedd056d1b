from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple
from models.group import GroupElement, GroupSpec, Scalar


@dataclass(frozen=True)
class TransportPlan:
    """
    Antisymmetric matrix g_ij of group elements; row i sums to the coefficient g_i.
    """

    group: GroupSpec
    entries: Tuple[Tuple[GroupElement, ...], ...]
    cost: Optional[Scalar] = None
    method: str = "brute"

    @property
    def n(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> GroupElement:
        return self.entries[i][j]

    def flattened(self) -> Tuple[GroupElement, ...]:
        """Upper triangular entries in row-major order, the tie-break key."""
        return tuple(self.entries[i][j] for i in range(self.n) for j in range(i + 1, self.n))


@dataclass(frozen=True)
class NbpReport:
    plan: TransportPlan
    nbp: bool
    acyclic: bool
    violated_rows: Tuple[Tuple[int, Scalar, Scalar], ...] = ()
    cycle_witness: Optional[Tuple[int, ...]] = None


@dataclass(frozen=True)
class ProofOfAbsence:
    """
    Exhaustive search record: no assignment of the free plan entries satisfies the NBP equalities.
    """

    coeffs: Tuple[GroupElement, ...]
    search_space: int
    nodes_visited: int
    acyclic_only: bool = False


@dataclass(frozen=True)
class PolytopeNorm:
    """
    Gauge of a centrally symmetric rational polytope given by its vertices.
    """

    vertices: Tuple[Tuple[Scalar, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.vertices[0])


@dataclass(frozen=True)
class ExtremeConditionReport:
    ok: bool
    combination: Tuple[Scalar, ...]
    gauge: Scalar
    bound: Scalar
    witness: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Counterexample:
    """
    Coefficients refuting NBP together with the exhaustive search that refutes them.
    """

    coeffs: Tuple[GroupElement, ...]
    proof: ProofOfAbsence
    tried: Tuple[Tuple[GroupElement, ...], ...] = ()
