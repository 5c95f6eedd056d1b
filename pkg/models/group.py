from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Any, Dict, Optional, Sequence, Tuple, Union
from models.enums import FactorKind
from models.errors import ShapeMismatch

Scalar = Fraction
# int for Z, Fraction for R, int or tuple of residues for Zmod
Coord = Union[int, Fraction, Tuple[int, ...]]
GroupElement = Tuple[Coord, ...]


@dataclass(frozen=True)
class FactorSpec:
    """
    One elementary factor of a weighted l1 product group.

    A Zmod factor with several moduli is a single group Z_m1 x ... x Z_mk carrying
    a full norm table indexed in lexicographic (mixed radix) order, which is how
    non-l1 norms on products are expressed. A POWER factor is R with the norm
    weight*|x|^exponent; its values are irrational in general and only check_nbp
    accepts it.
    """

    kind: FactorKind
    weight: Scalar = Fraction(1)
    moduli: Tuple[int, ...] = ()
    norm_table: Tuple[Scalar, ...] = ()
    exponent: Scalar = Fraction(1)

    def __post_init__(self):
        if self.kind is FactorKind.ZMOD:
            if not self.moduli or any(m < 2 for m in self.moduli):
                raise ShapeMismatch(f"Invalid moduli: {self.moduli}")
            if len(self.norm_table) != prod(self.moduli):
                raise ShapeMismatch(
                    f"Norm table of size {len(self.norm_table)} does not match moduli {self.moduli}"
                )
        elif self.kind is FactorKind.POWER and not 0 < self.exponent <= 1:
            raise ShapeMismatch(f"Power norm exponent must lie in (0, 1], got {self.exponent}")
        if self.kind is not FactorKind.ZMOD and self.weight <= 0:
            raise ShapeMismatch(f"Factor weight must be positive, got {self.weight}")

    @property
    def is_finite(self) -> bool:
        return self.kind is FactorKind.ZMOD

    @property
    def order(self) -> Optional[int]:
        return prod(self.moduli) if self.is_finite else None

    @property
    def is_parity(self) -> bool:
        """True for a plain Z2 factor, the only finite factor with a matching solver."""
        return self.kind is FactorKind.ZMOD and self.moduli == (2,)

    @property
    def label(self) -> str:
        if self.kind is FactorKind.ZMOD:
            return "x".join(f"Z{m}" for m in self.moduli)
        if self.kind is FactorKind.POWER:
            return f"R^{self.exponent}"
        return self.kind.value


@dataclass(frozen=True)
class GroupSpec:
    """
    A finite ordered product of factors; the norm is the sum of the factor norms.
    """

    factors: Tuple[FactorSpec, ...]

    def __post_init__(self):
        if not self.factors:
            raise ShapeMismatch("A group needs at least one factor")

    @property
    def is_finite(self) -> bool:
        return all(f.is_finite for f in self.factors)

    @property
    def order(self) -> Optional[int]:
        return prod(f.order for f in self.factors) if self.is_finite else None

    @property
    def label(self) -> str:
        return " x ".join(f.label for f in self.factors)

    def factor_group(self, k: int) -> "GroupSpec":
        return GroupSpec((self.factors[k],))


@dataclass(frozen=True)
class NormViolation:
    """
    First violated norm axiom found by validate_norm.
    """

    axiom: str
    factor: int
    witness: Dict[str, Any] = field(default_factory=dict)


def int_factor(weight: Any = 1) -> FactorSpec:
    return FactorSpec(FactorKind.Z, weight=Fraction(weight))


def real_factor(weight: Any = 1) -> FactorSpec:
    return FactorSpec(FactorKind.R, weight=Fraction(weight))


def power_factor(exponent: Any, weight: Any = 1) -> FactorSpec:
    return FactorSpec(FactorKind.POWER, weight=Fraction(weight), exponent=Fraction(exponent))


def mod_factor(moduli: Union[int, Sequence[int]], norm_table: Sequence[Any]) -> FactorSpec:
    if isinstance(moduli, int):
        moduli = (moduli,)
    return FactorSpec(
        FactorKind.ZMOD,
        moduli=tuple(moduli),
        norm_table=tuple(Fraction(v) for v in norm_table),
    )


def z2_factor(weight: Any = 1) -> FactorSpec:
    return mod_factor(2, (0, weight))


def group(*factors: FactorSpec) -> GroupSpec:
    return GroupSpec(tuple(factors))
