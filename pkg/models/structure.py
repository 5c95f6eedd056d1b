from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple
from models.group import GroupElement, Scalar


@dataclass(frozen=True)
class IndecomposableSet:
    """
    One representative of {g, -g} per nonzero indecomposable element, with its order (None if infinite).
    """

    representatives: Tuple[GroupElement, ...]
    orders: Tuple[Optional[int], ...]


@dataclass(frozen=True)
class LawReport:
    ok: bool
    failed_law: Optional[str] = None
    witness: Dict[str, Any] = field(default_factory=dict)
    minimizer: Optional[int] = None
    residual: Optional[GroupElement] = None


@dataclass(frozen=True)
class SignClassification:
    """
    Split of sampled nonzero elements into the class of a base element and its negative,
    with the signed norm embedding phi(a) = +-|a|.
    """

    base: GroupElement
    signs: Dict[GroupElement, int]
    phi: Dict[GroupElement, Scalar]
