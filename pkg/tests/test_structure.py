from itertools import product
import pytest
from helpers.structure import (
    check_phi_additivity,
    check_sign_scaling,
    check_sign_transitivity,
    classify_signs,
    is_indecomposable,
    list_indecomposables,
    pullback_oracle,
    related,
    verify_indecomposable_laws,
    verify_pairwise_l1,
)
from models.errors import InconsistentClasses, NotIndecomposable, SameSubgroup, ShapeMismatch
from models.group import group, int_factor, mod_factor, z2_factor
from strategies import KLEIN, Z, Z4

SQUARE = [(m, n) for m, n in product(range(-3, 4), repeat=2)]
# Klein group with |(0,1)| = |(1,0)| = 2 and |(1,1)| = 3
HEAVY_KLEIN = group(mod_factor((2, 2), (0, 2, 2, 3)))


def l1(x):
    return sum(abs(c) for c in x)


def test_is_indecomposable():
    assert is_indecomposable(Z, (1,)) == (True, None)
    assert is_indecomposable(Z, (2,)) == (False, (1,))
    assert is_indecomposable(Z, (0,)) == (False, None)
    assert is_indecomposable(Z4, (2,))[0] is False
    assert is_indecomposable(KLEIN, (1, 1))[0] is False


def test_list_indecomposables():
    found = list_indecomposables(Z, radius=3)
    assert found.representatives == ((1,),)
    assert found.orders == (None,)
    assert list_indecomposables(Z4).representatives == ((1,),)
    assert list_indecomposables(Z4).orders == (4,)
    assert list_indecomposables(KLEIN).representatives == ((0, 1), (1, 0))
    mixed = list_indecomposables(group(int_factor(), z2_factor()), radius=2)
    assert mixed.representatives == ((0, 1), (1, 0))
    assert mixed.orders == (2, None)
    with pytest.raises(ShapeMismatch):
        list_indecomposables(Z)


def test_laws_hold_on_the_integers():
    report = verify_indecomposable_laws(Z, (1,), (5,))
    assert report.ok
    assert report.minimizer == 5
    assert report.residual == (0,)


def test_laws_hold_on_a_short_cyclic_segment():
    report = verify_indecomposable_laws(Z4, (1,), (2,), n_max=2)
    assert report.ok and report.minimizer == 2


def test_linearity_law_fails_on_cyclic_group_of_order_three():
    report = verify_indecomposable_laws(group(mod_factor(3, (0, 1, 1))), (1,), (0,))
    assert not report.ok
    assert report.failed_law == "a"
    assert report.witness == {"n": 2, "norm_ng": 1, "n_norm_g": 2}


def test_unique_minimizer_law_fails_on_a_tie():
    spec = group(mod_factor(4, (0, 2, 1, 2)))
    report = verify_indecomposable_laws(spec, (2,), (1,))
    assert report.failed_law == "b"
    assert report.witness == {"minimizers": [0, 1], "distance": 2}


def test_residual_law_fails_on_heavy_klein():
    report = verify_indecomposable_laws(HEAVY_KLEIN, ((0, 1),), ((1, 0),))
    assert report.failed_law == "c"
    assert report.minimizer == 0
    assert report.residual == ((1, 0),)
    assert report.witness == {"m": -7, "norm_sum": 3, "bound": 4}


def test_laws_require_an_indecomposable():
    with pytest.raises(NotIndecomposable):
        verify_indecomposable_laws(Z, (2,), (1,))


def test_pairwise_l1():
    assert verify_pairwise_l1(KLEIN, (1, 0), (0, 1)).ok
    report = verify_pairwise_l1(HEAVY_KLEIN, ((0, 1),), ((1, 0),))
    assert report.failed_law == "additivity"
    assert report.witness == {"k": -5, "l": -5, "norm_sum": 3, "bound": 4}
    with pytest.raises(SameSubgroup):
        verify_pairwise_l1(Z, (1,), (-1,))


def test_related():
    oracle = pullback_oracle((2, 3))
    assert related(oracle, (1, 0), (0, 1))
    assert not related(oracle, (1, 0), (-1, 0))
    assert not related(l1, (1, 0), (0, 1))


def test_sign_classes_of_a_pullback_norm():
    oracle = pullback_oracle((2, 3))
    cls = classify_signs(oracle, SQUARE, (1, 0))
    assert (0, 0) not in cls.signs and (3, -2) not in cls.signs
    assert cls.signs[(1, 0)] == 1 and cls.signs[(0, -1)] == -1
    assert cls.phi[(-2, 1)] == -1
    assert all(cls.phi[a] == 2 * a[0] + 3 * a[1] for a in cls.phi)
    assert check_sign_transitivity(oracle, cls) is None
    assert check_sign_scaling(oracle, cls) is None
    assert check_phi_additivity(cls) is None


def test_l1_norm_has_no_consistent_sign_classes():
    with pytest.raises(InconsistentClasses) as info:
        classify_signs(l1, SQUARE, (1, 0))
    assert info.value.witness["plus"] is False


def test_sample_must_be_closed_under_negation():
    with pytest.raises(ShapeMismatch):
        classify_signs(pullback_oracle((1,)), [(1,), (2,), (-1,)], (1,))


def test_linearity_law_fails_on_cyclic_group_of_order_four():
    report = verify_indecomposable_laws(Z4, (1,), (0,))
    assert report.failed_law == "a"
    assert report.witness == {"n": 3, "norm_ng": 1, "n_norm_g": 3}


def test_laws_hold_on_integers_times_parity():
    spec = group(int_factor(), z2_factor())
    report = verify_indecomposable_laws(spec, (1, 0), (2, 1))
    assert report.ok
    assert report.minimizer == 2
    assert report.residual == (0, 1)
    assert verify_pairwise_l1(spec, (1, 0), (0, 1)).ok


def test_minimizer_far_outside_the_law_range():
    spec = group(int_factor(), z2_factor())
    report = verify_indecomposable_laws(spec, (1, 0), (20, 1), n_max=8)
    assert report.ok
    assert report.minimizer == 20
    assert report.residual == (0, 1)
    report = verify_indecomposable_laws(spec, (1, 0), (-17, 0), n_max=4)
    assert (report.ok, report.minimizer, report.residual) == (True, -17, (0, 0))
