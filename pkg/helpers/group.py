from fractions import Fraction
from itertools import product
from math import prod
from typing import Any, Iterator, List, Optional, Sequence, Tuple
from sympy import Symbol, expand, minimal_polynomial, sympify
from constants import DEFAULT_BUDGET
from helpers.logger import Logger
from helpers.lp import to_rational
from models.enums import FactorKind
from models.errors import BudgetExceeded, InfiniteGroup, ShapeMismatch, UnsupportedFactor
from models.group import (
    Coord,
    FactorSpec,
    GroupElement,
    GroupSpec,
    NormViolation,
    Scalar,
)

logger = Logger("group")

Triple = Tuple[GroupElement, GroupElement, GroupElement]


def _table_index(f: FactorSpec, c: Coord) -> int:
    """
    Position of a Zmod coordinate in the factor's norm table (mixed radix, first modulus most significant).
    """
    residues = c if isinstance(c, tuple) else (c,)
    index = 0
    for r, m in zip(residues, f.moduli):
        index = index * m + r
    return index


def _coord_conforms(f: FactorSpec, c: Coord) -> bool:
    if f.kind is FactorKind.Z:
        return isinstance(c, int) and not isinstance(c, bool)
    if f.kind in (FactorKind.R, FactorKind.POWER):
        return isinstance(c, (int, Fraction)) and not isinstance(c, bool)
    if len(f.moduli) == 1:
        return isinstance(c, int) and 0 <= c < f.moduli[0]
    return (
        isinstance(c, tuple)
        and len(c) == len(f.moduli)
        and all(isinstance(r, int) and 0 <= r < m for r, m in zip(c, f.moduli))
    )


def check_element(spec: GroupSpec, x: GroupElement) -> None:
    """
    Raise ShapeMismatch unless the element has one well-formed coordinate per factor.

    Args:
        spec (GroupSpec): The group.
        x (GroupElement): The candidate element.
    """
    if not isinstance(x, tuple) or len(x) != len(spec.factors):
        raise ShapeMismatch(f"Element {x} does not match group {spec.label}")
    for k, (f, c) in enumerate(zip(spec.factors, x)):
        if not _coord_conforms(f, c):
            raise ShapeMismatch(f"Coordinate {k} of {x} is not an element of {f.label}")


def _factor_add(f: FactorSpec, a: Coord, b: Coord) -> Coord:
    if f.kind is not FactorKind.ZMOD:
        return a + b
    if len(f.moduli) == 1:
        return (a + b) % f.moduli[0]
    return tuple((r + s) % m for r, s, m in zip(a, b, f.moduli))


def _factor_neg(f: FactorSpec, a: Coord) -> Coord:
    if f.kind is not FactorKind.ZMOD:
        return -a
    if len(f.moduli) == 1:
        return (-a) % f.moduli[0]
    return tuple((-r) % m for r, m in zip(a, f.moduli))


def factor_zero(f: FactorSpec) -> Coord:
    if f.kind in (FactorKind.R, FactorKind.POWER):
        return Fraction(0)
    if f.kind is FactorKind.ZMOD and len(f.moduli) > 1:
        return tuple(0 for _ in f.moduli)
    return 0


def factor_norm(f: FactorSpec, c: Coord) -> Scalar:
    """
    Weighted norm of a single coordinate.
    """
    if f.kind is FactorKind.ZMOD:
        return f.norm_table[_table_index(f, c)]
    if f.kind is FactorKind.POWER:
        return to_rational(f.weight) * to_rational(abs(Fraction(c))) ** to_rational(f.exponent)
    return f.weight * abs(Fraction(c))


def add(spec: GroupSpec, x: GroupElement, y: GroupElement) -> GroupElement:
    """
    Componentwise sum, reduced modulo m on every Zmod factor.

    Args:
        spec (GroupSpec): The group.
        x (GroupElement): First summand.
        y (GroupElement): Second summand.

    Returns:
        GroupElement: x + y.
    """
    check_element(spec, x)
    check_element(spec, y)
    return tuple(_factor_add(f, a, b) for f, a, b in zip(spec.factors, x, y))


def neg(spec: GroupSpec, x: GroupElement) -> GroupElement:
    check_element(spec, x)
    return tuple(_factor_neg(f, a) for f, a in zip(spec.factors, x))


def sub(spec: GroupSpec, x: GroupElement, y: GroupElement) -> GroupElement:
    return add(spec, x, neg(spec, y))


def zero(spec: GroupSpec) -> GroupElement:
    return tuple(factor_zero(f) for f in spec.factors)


def is_zero(spec: GroupSpec, x: GroupElement) -> bool:
    return x == zero(spec)


def multiple(spec: GroupSpec, n: int, x: GroupElement) -> GroupElement:
    """
    The integer multiple n*x, for any sign of n.
    """
    check_element(spec, x)
    base = x if n >= 0 else neg(spec, x)
    out = zero(spec)
    for _ in range(abs(n)):
        out = tuple(_factor_add(f, a, b) for f, a, b in zip(spec.factors, out, base))
    return out


def sum_elements(spec: GroupSpec, xs: Sequence[GroupElement]) -> GroupElement:
    out = zero(spec)
    for x in xs:
        out = add(spec, out, x)
    return out


def norm(spec: GroupSpec, x: GroupElement) -> Scalar:
    """
    Weighted l1 norm: weight*|coord| on Z and R factors plus the table value on Zmod factors.

    A power factor contributes weight*|coord|^exponent as a sympy number.

    Args:
        spec (GroupSpec): The group.
        x (GroupElement): The element.

    Returns:
        Scalar: |x|.
    """
    check_element(spec, x)
    return sum((factor_norm(f, c) for f, c in zip(spec.factors, x)), Fraction(0))


def norms_equal(a: Any, b: Any) -> bool:
    """
    Exact equality of two norm values, rational or sums of rational powers.

    Args:
        a, b (Any): Fractions or sympy numbers.

    Returns:
        bool: True when a - b is zero as an algebraic number.
    """
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    diff = expand(sympify(a) - sympify(b))
    if diff == 0:
        return True
    if diff.is_rational:
        return False
    t = Symbol("t")
    return minimal_polynomial(diff, t) == t


def require_rational_norm(spec: GroupSpec, operation: str) -> None:
    """
    Reject power norm factors in operations that need rational norm values.
    """
    for k, f in enumerate(spec.factors):
        if f.kind is FactorKind.POWER:
            raise UnsupportedFactor(
                f"{operation} does not support the power norm factor {k} ({f.label})",
                {"factor": k, "operation": operation},
            )


def element_order(spec: GroupSpec, x: GroupElement) -> Optional[int]:
    """
    Order of x, or None when x generates an infinite cyclic subgroup.
    """
    check_element(spec, x)
    if not spec.is_finite:
        infinite = any(
            f.kind is not FactorKind.ZMOD and c != 0 for f, c in zip(spec.factors, x)
        )
        if infinite:
            return None
    n, current = 1, x
    while not is_zero(spec, current):
        current = add(spec, current, x)
        n += 1
    return n


def canonical_key(x: GroupElement) -> tuple:
    """
    Sort key preferring small absolute values and, among +-c, the positive one.
    """
    key = []
    for c in x:
        if isinstance(c, tuple):
            key.append((0, c, 0))
        else:
            key.append((abs(c), 1 if c < 0 else 0, c))
    return tuple(key)


def canonical_rep(spec: GroupSpec, x: GroupElement) -> GroupElement:
    """
    Representative of {x, -x}; on Zmod factors the smaller residue, on Z and R the positive sign.
    """
    return min(x, neg(spec, x), key=canonical_key)


def _enumerate_factor(f: FactorSpec) -> List[Coord]:
    if len(f.moduli) == 1:
        return list(range(f.moduli[0]))
    return list(product(*(range(m) for m in f.moduli)))


def enumerate_elements(spec: GroupSpec) -> List[GroupElement]:
    """
    All elements of a finite group in lexicographic order.

    Args:
        spec (GroupSpec): A group whose factors are all Zmod.

    Returns:
        List[GroupElement]: m1*...*mr elements.
    """
    if not spec.is_finite:
        raise InfiniteGroup(f"Group {spec.label} is infinite")
    return list(product(*(_enumerate_factor(f) for f in spec.factors)))


def ball(spec: GroupSpec, radius: Scalar, budget: int = DEFAULT_BUDGET) -> List[GroupElement]:
    """
    All elements with |h| <= radius, for groups without R factors.

    Args:
        spec (GroupSpec): The group.
        radius (Scalar): The closed ball radius.
        budget (int): Maximum number of candidate coordinates tuples to scan.

    Returns:
        List[GroupElement]: The ball in lexicographic order.
    """
    ranges = []
    for f in spec.factors:
        if f.kind in (FactorKind.R, FactorKind.POWER):
            raise InfiniteGroup(f"Balls in {spec.label} are not finite")
        if f.kind is FactorKind.Z:
            r = int(Fraction(radius) / f.weight)
            ranges.append(list(range(-r, r + 1)))
        else:
            ranges.append(_enumerate_factor(f))
    size = prod(len(r) for r in ranges)
    if size > budget:
        raise BudgetExceeded(
            f"Ball of radius {radius} in {spec.label} has {size} candidates",
            {"size": size, "budget": budget},
        )
    return [x for x in product(*ranges) if norm(spec, x) <= radius]


def enumerate_zero_mean_triples(spec: GroupSpec) -> List[Triple]:
    """
    All unordered triples (a, b, c) != (0, 0, 0) with a + b + c = 0, one per permutation class.

    Triples are sorted by element order so that a <= b <= c.

    Args:
        spec (GroupSpec): A finite group.

    Returns:
        List[Triple]: The canonical triples in lexicographic order.
    """
    elements = enumerate_elements(spec)
    position = {x: i for i, x in enumerate(elements)}
    triples = []
    for i, a in enumerate(elements):
        for b in elements[i:]:
            c = neg(spec, add(spec, a, b))
            if position[c] < position[b]:
                continue
            if is_zero(spec, a) and is_zero(spec, b):
                continue
            triples.append((a, b, c))
    return triples


def validate_norm(spec: GroupSpec) -> Optional[NormViolation]:
    """
    Check the norm axioms on every factor (exhaustively on Zmod tables).

    Args:
        spec (GroupSpec): The group to check.

    Returns:
        Optional[NormViolation]: None when every axiom holds, otherwise the first violation.
    """
    for k, f in enumerate(spec.factors):
        if f.kind is not FactorKind.ZMOD:
            if f.weight <= 0:
                return NormViolation("positivity", k, {"weight": f.weight})
            continue
        coords = _enumerate_factor(f)
        for c in coords:
            value = factor_norm(f, c)
            if c == factor_zero(f) and value != 0:
                return NormViolation("definiteness", k, {"g": c, "norm": value})
            if c != factor_zero(f) and value <= 0:
                return NormViolation("definiteness", k, {"g": c, "norm": value})
        for c in coords:
            inverse = _factor_neg(f, c)
            if factor_norm(f, c) != factor_norm(f, inverse):
                return NormViolation(
                    "symmetry",
                    k,
                    {"g": c, "norm": factor_norm(f, c), "-g": inverse, "norm_inverse": factor_norm(f, inverse)},
                )
        for c in coords:
            for d in coords:
                total = _factor_add(f, c, d)
                if factor_norm(f, total) > factor_norm(f, c) + factor_norm(f, d):
                    return NormViolation(
                        "subadditivity",
                        k,
                        {
                            "g": c,
                            "h": d,
                            "g+h": total,
                            "norm_sum": factor_norm(f, total),
                            "bound": factor_norm(f, c) + factor_norm(f, d),
                        },
                    )
    return None


def project_element(x: GroupElement, k: int) -> GroupElement:
    return (x[k],)


def embed_coordinate(spec: GroupSpec, k: int, c: Coord) -> GroupElement:
    """
    The element of spec that is zero everywhere except for coordinate k.
    """
    out = list(zero(spec))
    out[k] = c
    return tuple(out)


def _invariant_factor_chains(max_order: int, prefix: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
    current = prod(prefix) if prefix else 1
    last = prefix[-1] if prefix else 1
    m = last if prefix else 2
    while current * m <= max_order:
        if m >= 2 and m % last == 0:
            chain = prefix + (m,)
            yield chain
            yield from _invariant_factor_chains(max_order, chain)
        m += 1


def enumerate_abelian_groups(max_order: int) -> List[Tuple[int, ...]]:
    """
    Finite Abelian groups of order 2..max_order up to isomorphism, as invariant factors m1 | m2 | ...

    Args:
        max_order (int): Largest group order to list.

    Returns:
        List[Tuple[int, ...]]: Sorted by order, then number of factors, then moduli.
    """
    groups = list(_invariant_factor_chains(max_order, ()))
    groups.sort(key=lambda ms: (prod(ms), len(ms), ms))
    logger.debug(f"{len(groups)} Abelian groups of order <= {max_order}")
    return groups


def embeds(h_moduli: Sequence[int], g_moduli: Sequence[int]) -> bool:
    """
    Whether the group with invariant factors h_moduli is isomorphic to a subgroup of g_moduli.

    Args:
        h_moduli (Sequence[int]): Invariant factors m1 | m2 | ... of the candidate subgroup.
        g_moduli (Sequence[int]): Invariant factors of the ambient group.

    Returns:
        bool: True when, largest factors aligned, every factor of h divides its partner in g.
    """
    h, g = sorted(h_moduli, reverse=True), sorted(g_moduli, reverse=True)
    if len(h) > len(g):
        return False
    return all(b % a == 0 for a, b in zip(h, g))
