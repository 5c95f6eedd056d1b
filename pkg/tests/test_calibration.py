from fractions import Fraction
import pytest
from hypothesis import given, settings, strategies as st
from helpers.calibration import (
    calibration_value,
    certify,
    converse_check,
    interval_tree,
    kantorovich_dual,
    make_tree,
    matching_tree,
    push_forward,
    star_glue,
    tree_fill,
    verify_tree_map,
)
from helpers.metric import make_instance, metric_from_matrix, metric_from_points
from helpers.solver import solve
from models.chain import Chain0
from models.enums import PointNorm
from models.errors import LipschitzViolation, NonZeroSum, NotCalibrated, ShapeMismatch, UnsupportedFactor
from models.group import group, int_factor, real_factor, z2_factor
from strategies import R, Z, Z2, far_pairs, instances

PATH = [(0, 1, 1), (1, 2, 1)]


def test_make_tree():
    tree = make_tree(PATH)
    assert tree.vertices == (0, 1, 2)
    assert tree.distance(0, 2) == 2
    assert make_tree([], size=1).vertices == (0,)
    with pytest.raises(ShapeMismatch):
        make_tree([(0, 1, 1), (1, 2, 1), (2, 0, 1)])
    with pytest.raises(ShapeMismatch):
        make_tree([(0, 1, 0)])
    with pytest.raises(ShapeMismatch):
        make_tree([(0, 1, 1)], size=3)


def test_kantorovich_dual_on_the_triangle(triangle_metric):
    potential = kantorovich_dual(make_instance(triangle_metric, Z, [(1,), (1,), (-2,)]))
    assert potential.values == (1, 2, 0)
    assert potential.value == 3
    with pytest.raises(UnsupportedFactor):
        kantorovich_dual(make_instance(triangle_metric, Z2, [(1,), (1,), (0,)]))


def test_tree_fill_on_a_path():
    fill, total = tree_fill(make_tree(PATH), Chain0(Z, {0: (3,), 2: (-3,)}), Z)
    assert total == 6
    assert len(fill.edges) == 2


def test_tree_fill_of_a_parity_star():
    tree = make_tree([(0, k, 1) for k in range(1, 5)])
    chain = Chain0(Z2, {k: (1,) for k in range(1, 5)})
    assert tree_fill(tree, chain, Z2)[1] == 4


def test_tree_fill_input_errors():
    with pytest.raises(ShapeMismatch):
        tree_fill(make_tree(PATH), Chain0(Z, {5: (1,), 0: (-1,)}), Z)
    with pytest.raises(NonZeroSum):
        tree_fill(make_tree(PATH), Chain0(Z, {0: (1,)}), Z)


def test_star_glue_relabels_from_one():
    single = make_tree([(0, 1, 2)])
    glued, labels = star_glue([single, single], 100)
    assert glued.vertices == (0, 1, 2, 3, 4)
    assert labels == [{0: 1, 1: 2}, {0: 3, 1: 4}]
    assert glued.distance(2, 4) == 204
    with pytest.raises(ShapeMismatch):
        star_glue([single], 0)


def test_verify_tree_map():
    metric = metric_from_matrix([[0, 1], [1, 0]])
    tree = make_tree([(0, 1, 2)])
    report = verify_tree_map(metric, tree, (0, 1))
    assert not report.ok
    assert (report.pair, report.tree_distance, report.metric_distance) == ((0, 1), 2, 1)
    assert verify_tree_map(metric, tree, (1, 1)).ok
    with pytest.raises(ShapeMismatch):
        verify_tree_map(metric, tree, (0,))


def test_push_forward_merges_points():
    spec = group(int_factor(), z2_factor())
    inst = make_instance(far_pairs(4), spec, [(1, 1), (-1, 1), (2, 0), (-2, 0)])
    chain = push_forward(inst, (0, 0, 1, 1), 0)
    assert chain.values == {}
    chain = push_forward(inst, (0, 1, 1, 1), 1)
    assert chain.values == {0: (1,), 1: (1,)}


def test_interval_tree_from_potentials(triangle_metric):
    inst = make_instance(triangle_metric, Z, [(1,), (1,), (-2,)])
    tree, tmap = interval_tree(kantorovich_dual(inst))
    assert tmap == (1, 2, 0)
    assert verify_tree_map(triangle_metric, tree, tmap).ok
    assert calibration_value(inst, [(tree, tmap)]) == 3


def test_certify_integer_instance(triangle_metric):
    cert = certify(make_instance(triangle_metric, Z, [(1,), (1,), (-2,)]))
    assert cert.value == cert.cost == 3
    assert cert.gap == 0


def test_matching_tree_certifies_far_pairs(z2_four_points):
    tree, tmap = matching_tree(z2_four_points.metric, [(0, 1), (2, 3)])
    assert tmap == (2, 3, 5, 6)
    assert tree.length(0, 1) == Fraction(9, 2)
    assert calibration_value(z2_four_points, [(tree, tmap)]) == 2
    report = converse_check(z2_four_points, [(tree, tmap)])
    assert report.nbp
    cert = certify(z2_four_points)
    assert cert.potentials == (None,)
    assert cert.gap == 0


def test_matching_tree_with_zero_leg():
    metric = metric_from_points([[0], [2], [1]], PointNorm.L1)
    tree, tmap = matching_tree(metric, [(0, 1)])
    assert tmap == (1, 2, 0)
    assert tree.distance(1, 2) == 2


def test_matching_tree_without_lipschitz_leg():
    metric = metric_from_points([[0], [4], [1]], PointNorm.L1)
    with pytest.raises(LipschitzViolation):
        matching_tree(metric, [(0, 1)])


def test_product_certificate_is_tight():
    spec = group(int_factor(), z2_factor())
    inst = make_instance(far_pairs(4), spec, [(1, 1), (-1, 1), (0, 1), (0, 1)])
    cert = certify(inst)
    assert cert.cost == 3
    assert cert.value == 3


def test_loose_candidate_is_not_a_calibration(triangle_metric):
    inst = make_instance(triangle_metric, Z, [(1,), (1,), (-2,)])
    point = make_tree([], size=1)
    assert calibration_value(inst, [(point, (0, 0, 0))]) == 0
    with pytest.raises(NotCalibrated):
        converse_check(inst, [(point, (0, 0, 0))])
    with pytest.raises(ShapeMismatch):
        calibration_value(inst, [])


def test_stretching_candidate_is_rejected(triangle_metric):
    inst = make_instance(triangle_metric, Z, [(1,), (1,), (-2,)])
    with pytest.raises(LipschitzViolation):
        calibration_value(inst, [(make_tree([(0, 1, 5)]), (0, 1, 0))])


@settings(max_examples=200, deadline=None)
@given(instances(st.sampled_from([Z, R, group(int_factor(2), real_factor(3))]), 2, 5))
def test_kantorovich_duality_is_tight(inst):
    cert = certify(inst)
    assert cert.value == cert.cost == solve(inst).cost
    for k, potential in enumerate(cert.potentials):
        weight = inst.group.factors[k].weight
        for i in range(inst.n):
            for j in range(inst.n):
                assert abs(potential.values[i] - potential.values[j]) <= weight * inst.metric.dist(i, j)


@settings(max_examples=200, deadline=None)
@given(instances(st.sampled_from([Z2, group(int_factor(), z2_factor()), group(z2_factor(), z2_factor(2))]), 2, 5))
def test_calibration_never_exceeds_the_cost(inst):
    try:
        cert = certify(inst)
    except LipschitzViolation:
        return
    assert cert.value <= cert.cost
