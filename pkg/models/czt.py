from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple
from models.enums import Collinearity
from models.group import GroupElement, Scalar

Triple = Tuple[GroupElement, GroupElement, GroupElement]


@dataclass(frozen=True)
class CollinearityVerdict:
    kind: Collinearity
    equality: Optional[str] = None
    norms: Tuple[Scalar, ...] = ()


@dataclass(frozen=True)
class CztReport:
    """
    Outcome of a collinearity sweep; ``witness`` is the first noncollinear triple.
    """

    ok: bool
    checked: int
    witness: Optional[Tuple[Any, Any, Any]] = None
    norms: Tuple[Scalar, ...] = ()


@dataclass(frozen=True)
class CollinearityPattern:
    """
    One equality choice per class triple: 0 for |a|+|b|=|c|, 1 for |a|+|c|=|b|, 2 for |b|+|c|=|a|.
    """

    triples: Tuple[Tuple[int, int, int], ...]
    choices: Tuple[int, ...]


@dataclass(frozen=True)
class NormFeasibilityResult:
    moduli: Tuple[int, ...]
    feasible: bool
    witness_norm: Optional[Tuple[Scalar, ...]] = None
    family_description: Tuple[str, ...] = ()
    infeasibility_trace: Optional[Dict[str, Any]] = None
    classes: Tuple[Tuple[GroupElement, ...], ...] = ()
    patterns: Tuple[CollinearityPattern, ...] = ()


@dataclass(frozen=True)
class CyclicForcingResult:
    """
    First multiple n with |ng| != n|g|; ``witness`` is a noncollinear triple of multiples
    (-a, -b, a+b) inside the segment when one exists.
    """

    ok: bool
    n: Optional[int] = None
    witness: Optional[Tuple[int, int, int]] = None
    inside_segment: bool = False


@dataclass(frozen=True)
class ClassificationRow:
    moduli: Tuple[int, ...]
    label: str
    result: NormFeasibilityResult
    details: Dict[str, Any] = field(default_factory=dict)
