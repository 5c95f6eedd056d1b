from dataclasses import dataclass
from typing import Tuple
from models.group import GroupElement, GroupSpec, Scalar


@dataclass(frozen=True)
class FiniteMetric:
    """
    An n-point metric space given by its exact distance matrix.

    Instances are only built through helpers.metric, which validates the axioms.
    """

    d: Tuple[Tuple[Scalar, ...], ...]
    provenance: str = "matrix"

    @property
    def n(self) -> int:
        return len(self.d)

    def dist(self, i: int, j: int) -> Scalar:
        return self.d[i][j]


@dataclass(frozen=True)
class Instance:
    """
    Points of a finite metric space with one group coefficient each, summing to zero.
    """

    metric: FiniteMetric
    group: GroupSpec
    coeffs: Tuple[GroupElement, ...]

    @property
    def n(self) -> int:
        return self.metric.n
