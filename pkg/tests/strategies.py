from fractions import Fraction
from math import prod
from typing import List, Sequence
from hypothesis import strategies as st
from helpers.group import enumerate_elements, neg, sum_elements
from helpers.metric import make_instance, metric_from_matrix, metric_from_points
from models.enums import FactorKind, PointNorm
from models.group import GroupSpec, group, int_factor, mod_factor, real_factor, z2_factor

Z = group(int_factor())
R = group(real_factor())
Z2 = group(z2_factor())
Z4 = group(mod_factor(4, (0, 1, 2, 1)))
KLEIN = group(z2_factor(), z2_factor())


def far_pairs(n: int, near: Sequence = ((0, 1), (2, 3)), short=1, long=10):
    """Matrix with the given pairs at distance `short` and every other pair at `long`."""
    d = [[Fraction(0) if i == j else Fraction(long) for j in range(n)] for i in range(n)]
    for i, j in near:
        d[i][j] = d[j][i] = Fraction(short)
    return metric_from_matrix(d)


@st.composite
def metrics(draw, min_n: int = 2, max_n: int = 4):
    """Rational point clouds in the plane under the l1 or sup norm."""
    n = draw(st.integers(min_n, max_n))
    points = draw(
        st.lists(
            st.tuples(st.integers(0, 8), st.integers(0, 8)), min_size=n, max_size=n, unique=True
        )
    )
    scale = draw(st.sampled_from([1, 2, 3]))
    p = draw(st.sampled_from([PointNorm.L1, PointNorm.LINF]))
    return metric_from_points([[Fraction(x, scale), Fraction(y, scale)] for x, y in points], p)


def factor_values(spec: GroupSpec, k: int, bound: int = 3):
    f = spec.factors[k]
    if f.kind is FactorKind.Z:
        return st.integers(-bound, bound)
    if f.kind is FactorKind.R:
        return st.builds(Fraction, st.integers(-2 * bound, 2 * bound), st.sampled_from([1, 2, 3]))
    return st.sampled_from([x[0] for x in enumerate_elements(spec.factor_group(k))])


def elements(spec: GroupSpec, bound: int = 3):
    return st.tuples(*(factor_values(spec, k, bound) for k in range(len(spec.factors))))


@st.composite
def coefficient_families(draw, spec: GroupSpec, n: int, bound: int = 3) -> List:
    """n coefficients summing to zero: n - 1 free draws and the balancing last one."""
    head = draw(st.lists(elements(spec, bound), min_size=n - 1, max_size=n - 1))
    return head + [neg(spec, sum_elements(spec, head))]


@st.composite
def instances(draw, specs, min_n: int = 2, max_n: int = 4, bound: int = 3):
    spec = draw(specs)
    metric = draw(metrics(min_n, max_n))
    coeffs = draw(coefficient_families(spec, metric.n, bound))
    return make_instance(metric, spec, coeffs)


@st.composite
def cyclic_norms(draw, m: int):
    """
    Norm tables on Z_m with values in [2, 4]: any such symmetric table is subadditive.
    """
    half = [draw(st.integers(2, 4)) for _ in range(m // 2)]
    table = [0] * m
    for k in range(1, m // 2 + 1):
        table[k] = table[m - k] = half[k - 1]
    return mod_factor(m, table)


@st.composite
def small_finite_groups(draw):
    """Weighted l1 products of order at most 8 over Z2 factors and cyclic table factors."""
    choice = draw(st.sampled_from(["Z2", "Z3", "Z4", "Z2xZ2", "Z2xZ4", "Z2xZ2xZ2", "Z5", "Z6"]))

    def weight():
        return draw(st.sampled_from([1, 2, Fraction(3, 2)]))

    if choice == "Z2":
        return group(z2_factor(weight()))
    if choice == "Z2xZ2":
        return group(z2_factor(weight()), z2_factor(weight()))
    if choice == "Z2xZ2xZ2":
        return group(z2_factor(weight()), z2_factor(weight()), z2_factor(weight()))
    if choice == "Z2xZ4":
        return group(z2_factor(weight()), draw(cyclic_norms(4)))
    return group(draw(cyclic_norms(int(choice[1:]))))


@st.composite
def finite_norm_groups(draw):
    """Every Abelian group of order <= 8 as one flattened Zmod factor with a random valid table."""
    moduli = draw(st.sampled_from([(2,), (3,), (4,), (2, 2), (5,), (6,), (7,), (8,), (2, 4), (2, 2, 2)]))
    order = prod(moduli)
    placeholder = group(mod_factor(moduli, [0] + [1] * (order - 1)))
    elements_ = enumerate_elements(placeholder)
    index = {x: k for k, x in enumerate(elements_)}
    table = [0] * order
    for x in elements_:
        k = index[x]
        if k == 0 or table[k]:
            continue
        value = draw(st.integers(2, 4))
        table[k] = value
        table[index[neg(placeholder, x)]] = value
    return group(mod_factor(moduli, table))
