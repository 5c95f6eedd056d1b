from fractions import Fraction
from itertools import product
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Rational, cbrt, sqrt
from helpers.group import (
    add,
    ball,
    canonical_rep,
    element_order,
    enumerate_abelian_groups,
    enumerate_elements,
    enumerate_zero_mean_triples,
    is_zero,
    multiple,
    neg,
    norm,
    norms_equal,
    require_rational_norm,
    validate_norm,
    zero,
)
from models.errors import InfiniteGroup, ShapeMismatch, UnsupportedFactor
from models.group import group, int_factor, mod_factor, power_factor, real_factor, z2_factor
from strategies import KLEIN, R, Z, Z2, Z4, elements, finite_norm_groups, small_finite_groups


def test_add_reduces_modulo():
    assert add(Z4, (3,), (2,)) == (1,)
    assert add(group(int_factor(), z2_factor()), (2, 1), (-2, 1)) == (0, 0)
    assert add(KLEIN, (1, 0), (0, 1)) == (1, 1)


def test_neg_and_zero():
    assert neg(Z4, (1,)) == (3,)
    assert neg(Z2, (1,)) == (1,)
    assert neg(R, (Fraction(3, 2),)) == (Fraction(-3, 2),)
    assert zero(KLEIN) == (0, 0)
    assert zero(group(mod_factor((2, 2), (0, 1, 1, 2)))) == ((0, 0),)


def test_norm_examples():
    assert norm(Z4, (2,)) == 2
    alpha = Fraction(3, 2)
    assert norm(group(z2_factor(), z2_factor(alpha)), (1, 1)) == 1 + alpha
    assert norm(group(int_factor(Fraction(3, 2))), (-4,)) == 6


def test_flattened_table_is_indexed_in_mixed_radix_order():
    spec = group(mod_factor((2, 4), range(8)))
    assert norm(spec, ((0, 3),)) == 3
    assert norm(spec, ((1, 0),)) == 4
    assert norm(spec, ((1, 2),)) == 6


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        add(Z4, (4,), (1,))
    with pytest.raises(ShapeMismatch):
        norm(KLEIN, (1,))
    with pytest.raises(ShapeMismatch):
        mod_factor(4, (0, 1, 1))


def test_enumerate_elements():
    assert enumerate_elements(KLEIN) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert enumerate_elements(Z4) == [(0,), (1,), (2,), (3,)]
    with pytest.raises(InfiniteGroup):
        enumerate_elements(group(int_factor(), z2_factor()))


def test_zero_mean_triples_examples():
    assert enumerate_zero_mean_triples(Z2) == [((0,), (1,), (1,))]
    assert ((1,), (1,), (2,)) in enumerate_zero_mean_triples(Z4)
    assert ((0, 1), (1, 0), (1, 1)) in enumerate_zero_mean_triples(KLEIN)


@settings(max_examples=40, deadline=None)
@given(small_finite_groups())
def test_zero_mean_triples_are_complete(spec):
    found = enumerate_zero_mean_triples(spec)
    assert len(found) == len(set(found))
    expected = set()
    z = zero(spec)
    for a, b in product(enumerate_elements(spec), repeat=2):
        c = neg(spec, add(spec, a, b))
        if (a, b, c) != (z, z, z):
            expected.add(tuple(sorted((a, b, c))))
    assert {tuple(sorted(t)) for t in found} == expected


def test_validate_norm_examples():
    assert validate_norm(Z4) is None
    violation = validate_norm(group(mod_factor(4, (0, 1, 3, 1))))
    assert violation.axiom == "subadditivity"
    assert violation.witness["g"] == 1 and violation.witness["h"] == 1
    violation = validate_norm(group(mod_factor(3, (0, 1, 2))))
    assert violation.axiom == "symmetry"


def test_validate_norm_definiteness():
    assert validate_norm(group(mod_factor(3, (0, 0, 0)))).axiom == "definiteness"
    assert validate_norm(group(mod_factor(2, (1, 1)))).axiom == "definiteness"


@settings(max_examples=60, deadline=None)
@given(finite_norm_groups())
def test_norm_axioms_hold_exhaustively(spec):
    assert validate_norm(spec) is None
    members = enumerate_elements(spec)
    for x in members:
        assert norm(spec, neg(spec, x)) == norm(spec, x)
        assert (norm(spec, x) == 0) == is_zero(spec, x)
        for y in members:
            assert norm(spec, add(spec, x, y)) <= norm(spec, x) + norm(spec, y)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_product_norm_is_sum_of_factor_norms(data):
    spec = group(int_factor(data.draw(st.sampled_from([1, 2, Fraction(1, 3)]))), real_factor(2), z2_factor(3))
    x = data.draw(elements(spec))
    y = data.draw(elements(spec))
    by_factor = sum(norm(spec.factor_group(k), (c,)) for k, c in enumerate(x))
    assert norm(spec, x) == by_factor
    assert norm(spec, add(spec, x, y)) <= norm(spec, x) + norm(spec, y)


def test_multiple_and_order():
    assert multiple(Z4, 3, (1,)) == (3,)
    assert multiple(Z4, -1, (1,)) == (3,)
    assert multiple(Z, -3, (2,)) == (-6,)
    assert element_order(Z4, (2,)) == 2
    assert element_order(Z4, (0,)) == 1
    assert element_order(group(int_factor(), z2_factor()), (0, 1)) == 2
    assert element_order(group(int_factor(), z2_factor()), (1, 1)) is None


def test_canonical_rep_prefers_small_residue_and_positive_sign():
    assert canonical_rep(Z4, (3,)) == (1,)
    assert canonical_rep(Z, (-2,)) == (2,)
    assert canonical_rep(Z4, (2,)) == (2,)
    assert canonical_rep(Z, (1,)) == (1,)
    assert canonical_rep(Z, (-1,)) == (1,)
    assert canonical_rep(group(int_factor(), z2_factor()), (-3, 1)) == (3, 1)


def test_ball():
    assert ball(Z, 2) == [(-2,), (-1,), (0,), (1,), (2,)]
    assert ball(group(int_factor(2)), 3) == [(-1,), (0,), (1,)]
    spec = group(int_factor(), z2_factor())
    assert set(ball(spec, 1)) == {(-1, 0), (0, 0), (1, 0), (0, 1)}
    with pytest.raises(InfiniteGroup):
        ball(R, 1)


def test_enumerate_abelian_groups():
    assert enumerate_abelian_groups(8) == [
        (2,), (3,), (4,), (2, 2), (5,), (6,), (7,), (8,), (2, 4), (2, 2, 2)
    ]
    assert len(enumerate_abelian_groups(16)) == 24


def test_power_norm_values():
    spec = group(power_factor(Fraction(1, 2), weight=3), int_factor())
    assert norms_equal(norm(spec, (Fraction(2), 1)), 3 * sqrt(2) + 1)
    assert norm(spec, (4, 0)) == 6
    assert norm(spec, (Fraction(-9, 4), 0)) == Rational(9, 2)
    assert spec.factors[0].label == "R^1/2"
    with pytest.raises(ShapeMismatch):
        power_factor(Fraction(3, 2))
    with pytest.raises(ShapeMismatch):
        power_factor(0)
    with pytest.raises(UnsupportedFactor):
        require_rational_norm(spec, "solve")
    require_rational_norm(group(real_factor()), "solve")
    with pytest.raises(InfiniteGroup):
        ball(spec, 1)


def test_norms_equal_is_exact():
    assert norms_equal(Fraction(1, 2), Fraction(2, 4))
    assert not norms_equal(Fraction(1), Fraction(2))
    assert norms_equal(sqrt(18), sqrt(8) + sqrt(2))
    assert norms_equal(cbrt(2) * cbrt(9), cbrt(18))
    assert not norms_equal(sqrt(2), Fraction(141421, 100000))
    assert not norms_equal(sqrt(2) + sqrt(3), sqrt(10))
    assert norms_equal(Rational(3), Fraction(3))
