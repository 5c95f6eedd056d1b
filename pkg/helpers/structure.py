from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple
from constants import DEFAULT_BUDGET
from helpers.group import (
    add,
    ball,
    canonical_rep,
    check_element,
    element_order,
    enumerate_elements,
    is_zero,
    multiple,
    norm,
    require_rational_norm,
    sub,
)
from helpers.logger import Logger
from models.errors import (
    InconsistentClasses,
    NotIndecomposable,
    SameSubgroup,
    ShapeMismatch,
)
from models.group import GroupElement, GroupSpec, Scalar
from models.structure import IndecomposableSet, LawReport, SignClassification

logger = Logger("structure")

NormOracle = Callable[[Tuple], Scalar]


def _witness_pool(spec: GroupSpec, radius: Scalar, budget: int) -> List[GroupElement]:
    if spec.is_finite:
        return enumerate_elements(spec)
    return ball(spec, radius, budget)


def is_indecomposable(
    spec: GroupSpec, g: GroupElement, budget: int = DEFAULT_BUDGET
) -> Tuple[bool, Optional[GroupElement]]:
    """
    Whether |h| + |g - h| = |g| forces h in {0, g}.

    Every witness h satisfies |h| <= |g|, so infinite groups are searched over that ball.

    Args:
        spec (GroupSpec): The group (no R factors unless it is finite).
        g (GroupElement): The element to test.
        budget (int): Maximum size of the ball.

    Returns:
        Tuple[bool, Optional[GroupElement]]: Verdict and the first decomposing h.
    """
    require_rational_norm(spec, "is_indecomposable")
    check_element(spec, g)
    if is_zero(spec, g):
        return False, None
    size = norm(spec, g)
    for h in _witness_pool(spec, size, budget):
        if is_zero(spec, h) or h == g:
            continue
        if norm(spec, h) + norm(spec, sub(spec, g, h)) == size:
            return False, h
    return True, None


def list_indecomposables(
    spec: GroupSpec, radius: Optional[Scalar] = None, budget: int = DEFAULT_BUDGET
) -> IndecomposableSet:
    """
    Canonical representatives of the nonzero indecomposable elements.

    Args:
        spec (GroupSpec): A finite group, or a lattice searched within a norm ball.
        radius (Scalar, optional): Ball radius, required for infinite groups.
        budget (int): Maximum ball size.

    Returns:
        IndecomposableSet: Representatives in lexicographic order.
    """
    require_rational_norm(spec, "list_indecomposables")
    if spec.is_finite:
        pool = enumerate_elements(spec)
    elif radius is None:
        raise ShapeMismatch(f"Group {spec.label} is infinite: a search radius is required")
    else:
        pool = ball(spec, Fraction(radius), budget)
    reps = set()
    for x in pool:
        rep = canonical_rep(spec, x)
        if is_zero(spec, x) or rep in reps:
            continue
        if is_indecomposable(spec, x, budget)[0]:
            reps.add(rep)
    ordered = tuple(sorted(reps))
    logger.debug(f"Indecomposables of {spec.label}: {ordered}")
    return IndecomposableSet(ordered, tuple(element_order(spec, x) for x in ordered))


def _require_indecomposable(spec: GroupSpec, g: GroupElement, budget: int) -> None:
    ok, h = is_indecomposable(spec, g, budget)
    if not ok:
        raise NotIndecomposable(f"{g} is not indecomposable", {"g": g, "h": h})


def _residue(n: int, order: Optional[int]) -> int:
    return n % order if order else n


def verify_indecomposable_laws(
    spec: GroupSpec,
    g: GroupElement,
    h: GroupElement,
    n_max: int = 8,
    budget: int = DEFAULT_BUDGET,
) -> LawReport:
    """
    Check the laws an indecomposable element obeys in a group with nonbranching plans.

    (a) |ng| = n|g| for 1 <= n <= n_max unless 2g = 0; for g of infinite order the range
        extends to 2|h|/|g| + 1, which contains every candidate for n(h, g).
    (b) n -> |h - ng| has a unique minimizer n(h, g) (modulo the order of g).
    (c) |mg + r| = |mg| + |r| for the residual r = h - n(h, g)g and |m| <= n_max.

    Args:
        spec (GroupSpec): The group.
        g (GroupElement): An indecomposable element.
        h (GroupElement): Any element.
        n_max (int): Range of the multiples checked.
        budget (int): Ball budget of the indecomposability test.

    Returns:
        LawReport: The first failing law with its witness, or ok with n(h, g) and r.
    """
    _require_indecomposable(spec, g, budget)
    check_element(spec, h)
    order = element_order(spec, g)
    g_norm = norm(spec, g)
    # a minimizer n has |ng| <= |h - ng| + |h| <= 2|h|
    reach = n_max if order else max(n_max, int(2 * norm(spec, h) / g_norm) + 1)
    if not is_zero(spec, add(spec, g, g)):
        for n in range(1, reach + 1):
            value = norm(spec, multiple(spec, n, g))
            if value != n * g_norm:
                return LawReport(
                    False, "a", {"n": n, "norm_ng": value, "n_norm_g": n * g_norm}
                )
    window = range(0, order) if order else range(-reach, reach + 1)
    distances = {n: norm(spec, sub(spec, h, multiple(spec, n, g))) for n in window}
    best = min(distances.values())
    minimizers = sorted({_residue(n, order) for n, v in distances.items() if v == best})
    if len(minimizers) > 1:
        return LawReport(False, "b", {"minimizers": minimizers, "distance": best})
    n0 = minimizers[0]
    residual = sub(spec, h, multiple(spec, n0, g))
    r_norm = norm(spec, residual)
    for m in range(-n_max, n_max + 1):
        mg = multiple(spec, m, g)
        value = norm(spec, add(spec, mg, residual))
        if value != norm(spec, mg) + r_norm:
            return LawReport(
                False,
                "c",
                {"m": m, "norm_sum": value, "bound": norm(spec, mg) + r_norm},
                n0,
                residual,
            )
    return LawReport(True, minimizer=n0, residual=residual)


def _cyclic_span(spec: GroupSpec, g: GroupElement, k_max: int) -> List[GroupElement]:
    order = element_order(spec, g)
    ks = range(order) if order else range(-k_max, k_max + 1)
    return [multiple(spec, k, g) for k in ks]


def verify_pairwise_l1(
    spec: GroupSpec,
    g: GroupElement,
    h: GroupElement,
    k_max: int = 6,
    budget: int = DEFAULT_BUDGET,
) -> LawReport:
    """
    Check |kg + lh| = |kg| + |lh| and that kg + lh = 0 only when kg = lh = 0, for |k|, |l| <= k_max.

    Args:
        spec (GroupSpec): The group.
        g (GroupElement): Indecomposable element.
        h (GroupElement): Indecomposable element generating a different subgroup.
        k_max (int): Range of the multiples.
        budget (int): Ball budget of the indecomposability test.

    Returns:
        LawReport: ok, or the failing law ("additivity" or "intersection") with its witness.
    """
    _require_indecomposable(spec, g, budget)
    _require_indecomposable(spec, h, budget)
    if h in _cyclic_span(spec, g, k_max) and g in _cyclic_span(spec, h, k_max):
        raise SameSubgroup(f"{g} and {h} generate the same subgroup", {"g": g, "h": h})
    for k in range(-k_max, k_max + 1):
        kg = multiple(spec, k, g)
        for l in range(-k_max, k_max + 1):
            lh = multiple(spec, l, h)
            total = add(spec, kg, lh)
            if is_zero(spec, total) and not (is_zero(spec, kg) and is_zero(spec, lh)):
                return LawReport(False, "intersection", {"k": k, "l": l})
            value = norm(spec, total)
            if value != norm(spec, kg) + norm(spec, lh):
                return LawReport(
                    False,
                    "additivity",
                    {"k": k, "l": l, "norm_sum": value, "bound": norm(spec, kg) + norm(spec, lh)},
                )
    return LawReport(True)


def pullback_oracle(weights: Sequence) -> NormOracle:
    """
    Norm |sum w_k x_k| on a lattice, pulled back from the real line.
    """
    ws = [Fraction(w) for w in weights]
    return lambda x: abs(sum((w * Fraction(c) for w, c in zip(ws, x)), Fraction(0)))


def _vec_add(a: Tuple, b: Tuple) -> Tuple:
    return tuple(x + y for x, y in zip(a, b))


def _vec_neg(a: Tuple) -> Tuple:
    return tuple(-x for x in a)


def _vec_scale(m: int, a: Tuple) -> Tuple:
    return tuple(m * x for x in a)


def related(oracle: NormOracle, a: Tuple, b: Tuple) -> bool:
    """a ~ b iff |a - b| < |a| + |b|."""
    return oracle(_vec_add(a, _vec_neg(b))) < oracle(a) + oracle(b)


def classify_signs(
    oracle: NormOracle, elements: Iterable[Tuple], g_plus: Tuple
) -> SignClassification:
    """
    Split sampled nonzero elements of a torsion-free group into the classes of g_plus and -g_plus.

    Args:
        oracle (NormOracle): Exact norm on coordinate tuples.
        elements (Iterable[Tuple]): Sample closed under negation.
        g_plus (Tuple): Base element of the positive class.

    Returns:
        SignClassification: Signs and the embedding values phi(a) = +-|a|.
    """
    sample = [tuple(a) for a in elements]
    present = set(sample)
    missing = next((a for a in sample if _vec_neg(a) not in present), None)
    if missing is not None:
        raise ShapeMismatch(f"Sample is not closed under negation: -{missing} missing")
    g_minus = _vec_neg(g_plus)
    signs: Dict[Tuple, int] = {}
    phi: Dict[Tuple, Scalar] = {}
    for a in sample:
        if oracle(a) == 0:
            continue
        plus, minus = related(oracle, a, g_plus), related(oracle, a, g_minus)
        if plus == minus:
            raise InconsistentClasses(
                f"{a} is related to {'both' if plus else 'neither'} of +-{g_plus}",
                {"element": a, "plus": plus, "minus": minus},
            )
        signs[a] = 1 if plus else -1
        phi[a] = signs[a] * oracle(a)
    logger.debug(f"Classified {len(signs)} samples against {g_plus}")
    return SignClassification(tuple(g_plus), signs, phi)


def check_sign_transitivity(oracle: NormOracle, cls: SignClassification) -> Optional[Dict]:
    """
    First triple with a ~ b, b ~ c but not a ~ c, or None.
    """
    sample = list(cls.signs)
    rel = {(a, b): related(oracle, a, b) for a in sample for b in sample}
    for a in sample:
        for b in sample:
            if not rel[(a, b)]:
                continue
            for c in sample:
                if rel[(b, c)] and not rel[(a, c)]:
                    return {"a": a, "b": b, "c": c}
    return None


def check_sign_scaling(
    oracle: NormOracle, cls: SignClassification, m_max: int = 4
) -> Optional[Dict]:
    """
    First pair with (a ~ b) != (ma ~ nb) for some 1 <= m, n <= m_max, or None.
    """
    sample = list(cls.signs)
    for a in sample:
        for b in sample:
            base = related(oracle, a, b)
            for m in range(1, m_max + 1):
                for n in range(1, m_max + 1):
                    if related(oracle, _vec_scale(m, a), _vec_scale(n, b)) != base:
                        return {"a": a, "b": b, "m": m, "n": n, "related": base}
    return None


def check_phi_additivity(cls: SignClassification) -> Optional[Dict]:
    """
    First sampled pair with phi(a + b) != phi(a) + phi(b), or None.
    """
    for a in cls.phi:
        for b in cls.phi:
            total = _vec_add(a, b)
            if total in cls.phi and cls.phi[total] != cls.phi[a] + cls.phi[b]:
                return {"a": a, "b": b, "phi_sum": cls.phi[total], "sum_phi": cls.phi[a] + cls.phi[b]}
    return None
