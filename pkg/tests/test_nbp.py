from fractions import Fraction
import pytest
from hypothesis import given, settings, strategies as st
from sympy import sqrt
from helpers.group import norms_equal
from helpers.metric import make_instance, metric_from_matrix
from helpers.nbp import (
    check_l1_extreme_condition,
    check_nbp,
    construct_nbp,
    find_nbp_counterexample,
    gauge,
    is_acyclic,
    polytope_norm,
    search_nbp,
)
from helpers.solver import cost, solve
from models.errors import DependentPoints, InfeasiblePlan, NotExtreme, ShapeMismatch, UnsupportedFactor
from models.group import group, int_factor, power_factor, z2_factor
from models.plan import ProofOfAbsence, TransportPlan
from strategies import KLEIN, R, Z, Z2, Z4, far_pairs, instances, metrics

UNIT3 = metric_from_matrix([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
UNIT4 = metric_from_matrix([[0 if i == j else 1 for j in range(4)] for i in range(4)])
HEXAGON = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)]


def plan_from_upper(group, n, upper, modulus=None):
    """Antisymmetric plan from a dict of upper-triangular single-coordinate entries."""
    rows = [[0] * n for _ in range(n)]
    for (i, j), v in upper.items():
        rows[i][j], rows[j][i] = v, -v
    if modulus:
        rows = [[v % modulus for v in row] for row in rows]
    return TransportPlan(group, tuple(tuple((v,) for v in row) for row in rows))


def test_check_nbp_accepts_the_pairing(z2_four_points):
    report = check_nbp(solve(z2_four_points), z2_four_points)
    assert report.nbp and report.acyclic
    assert report.violated_rows == ()
    assert report.cycle_witness is None


def test_check_nbp_integer_star():
    inst = make_instance(UNIT3, Z, [(3,), (-1,), (-2,)])
    report = check_nbp(plan_from_upper(Z, 3, {(0, 1): 1, (0, 2): 2}), inst)
    assert report.nbp and report.acyclic


def test_check_nbp_reports_the_branching_row():
    inst = make_instance(UNIT4, Z4, [(1,)] * 4)
    plan = plan_from_upper(Z4, 4, {(0, 3): 1, (1, 3): 1, (2, 3): 1}, modulus=4)
    report = check_nbp(plan, inst)
    assert not report.nbp
    assert report.violated_rows == ((3, 1, 3),)


def test_square_root_norm_has_no_nonbranching_split():
    sqrt_line = group(power_factor(Fraction(1, 2)))
    inst = make_instance(UNIT3, sqrt_line, [(2,), (-1,), (-1,)])
    report = check_nbp(plan_from_upper(sqrt_line, 3, {(0, 1): 1, (0, 2): 1}), inst)
    assert not report.nbp
    assert report.acyclic
    (row, value, spread), = report.violated_rows
    assert row == 0
    assert norms_equal(value, sqrt(2))
    assert spread == 2
    # the same plan is nonbranching for |x|
    line = make_instance(UNIT3, R, [(2,), (-1,), (-1,)])
    assert check_nbp(plan_from_upper(R, 3, {(0, 1): 1, (0, 2): 1}), line).nbp


def test_power_norm_direct_plans_pass():
    cube_root = group(power_factor(Fraction(1, 3), weight=2))
    inst = make_instance(UNIT3, cube_root, [(Fraction(5, 2),), (0,), (Fraction(-5, 2),)])
    assert check_nbp(plan_from_upper(cube_root, 3, {(0, 2): Fraction(5, 2)}), inst).nbp


def test_power_norm_is_rejected_outside_check_nbp():
    sqrt_line = group(power_factor(Fraction(1, 2)))
    inst = make_instance(UNIT3, sqrt_line, [(2,), (-1,), (-1,)])
    with pytest.raises(UnsupportedFactor):
        solve(inst)
    with pytest.raises(UnsupportedFactor):
        construct_nbp(sqrt_line, inst.coeffs)


def test_check_nbp_reports_a_support_cycle():
    inst = make_instance(UNIT3, Z, [(0,)] * 3)
    report = check_nbp(plan_from_upper(Z, 3, {(0, 1): 1, (1, 2): 1, (0, 2): -1}), inst)
    assert not report.acyclic
    assert sorted(report.cycle_witness) == [0, 1, 2]
    assert not report.nbp


def test_check_nbp_rejects_infeasible_plans(z2_four_points):
    with pytest.raises(InfeasiblePlan):
        check_nbp(plan_from_upper(Z2, 4, {(0, 1): 1}, modulus=2), z2_four_points)


def test_construct_without_metric():
    plan = construct_nbp(Z, [(3,), (-1,), (-2,)])
    assert plan.entry(0, 1) == (1,) and plan.entry(0, 2) == (2,)
    assert plan.cost is None
    plan = construct_nbp(KLEIN, [(1, 1), (1, 0), (0, 1)])
    assert plan.entry(0, 1) == (1, 0)
    assert plan.entry(0, 2) == (0, 1)
    assert plan.entry(1, 2) == (0, 0)
    plan = construct_nbp(Z2, [(1,)] * 4)
    assert plan.entry(0, 1) == (1,) and plan.entry(2, 3) == (1,)


def test_construct_rejects_cyclic_tables():
    with pytest.raises(UnsupportedFactor):
        construct_nbp(Z4, [(1,)] * 4)


def test_construct_with_metric_is_optimal(z2_four_points):
    plan = construct_nbp(Z2, z2_four_points.coeffs, z2_four_points.metric)
    assert plan.cost == 2
    inst = make_instance(far_pairs(4), Z, [(1,), (1,), (-1,), (-1,)])
    loose = construct_nbp(Z, inst.coeffs)
    assert cost(loose, inst.metric) >= solve(inst).cost
    assert construct_nbp(Z, inst.coeffs, inst.metric).cost == solve(inst).cost


@settings(max_examples=200, deadline=None)
@given(instances(st.sampled_from([Z, R, Z2, KLEIN]), 2, 6), st.booleans())
def test_constructed_plans_are_nonbranching_forests(inst, with_metric):
    plan = construct_nbp(inst.group, inst.coeffs, inst.metric if with_metric else None)
    report = check_nbp(plan, inst)
    assert report.nbp
    assert report.acyclic
    if with_metric:
        assert plan.cost == solve(inst).cost


def test_search_finds_plans_or_proves_absence():
    outcome = search_nbp(Z4, [(1,)] * 4)
    assert isinstance(outcome, ProofOfAbsence)
    assert outcome.search_space == 4 ** 3
    plan = search_nbp(Z2, [(1,), (1,)])
    assert plan.entry(0, 1) == (1,)
    coeffs = [(1, 1), (1, 0), (0, 1)]
    plan = search_nbp(KLEIN, coeffs)
    assert isinstance(plan, TransportPlan)
    assert check_nbp(plan, make_instance(UNIT3, KLEIN, coeffs)).nbp


def test_search_acyclic_only():
    plan = search_nbp(Z2, [(1,)] * 4, acyclic=True)
    assert is_acyclic(plan)[0]


def test_counterexample_for_cyclic_group_of_order_four():
    found = find_nbp_counterexample(Z4)
    assert found.coeffs == ((1,), (1,), (1,), (1,))
    assert len(found.tried) == 3
    assert isinstance(found.proof, ProofOfAbsence)


def test_no_counterexample_for_constructible_groups():
    assert find_nbp_counterexample(Z2) is None
    assert find_nbp_counterexample(KLEIN) is None


def test_polytope_validation():
    with pytest.raises(ShapeMismatch):
        polytope_norm([(1, 0), (0, 1), (-1, 0)])
    with pytest.raises(ShapeMismatch):
        polytope_norm([(1, 1), (-1, -1)])
    assert gauge(polytope_norm(HEXAGON), (0, 1)) == 1


def test_extreme_condition_fails_on_the_hexagon():
    report = check_l1_extreme_condition(polytope_norm(HEXAGON), [(1, 0), (-1, 1)], [1, 1])
    assert not report.ok
    assert report.combination == (0, 1)
    assert report.gauge == 1 and report.bound == 2


def test_extreme_condition_holds_on_cross_polytope_and_square():
    cross = polytope_norm([(1, 0), (-1, 0), (0, 1), (0, -1)])
    report = check_l1_extreme_condition(cross, [(1, 0), (0, 1)], [1, 1])
    assert report.ok and report.gauge == report.bound == 2
    square = polytope_norm([(1, 1), (1, -1), (-1, 1), (-1, -1)])
    assert check_l1_extreme_condition(square, [(1, 1), (1, -1)], [1, 1]).ok


def test_extreme_condition_input_errors():
    ball = polytope_norm(HEXAGON)
    with pytest.raises(NotExtreme):
        check_l1_extreme_condition(ball, [(1, 1), (1, 0)], [1, 1])
    with pytest.raises(DependentPoints):
        check_l1_extreme_condition(ball, [(1, 0), (-1, 0)], [1, 1])


@settings(max_examples=50, deadline=None)
@given(metrics(2, 5), st.data())
def test_metric_aware_parity_plan_matches_solver(metric, data):
    ones = data.draw(st.lists(st.booleans(), min_size=metric.n, max_size=metric.n))
    if sum(ones) % 2:
        ones[0] = not ones[0]
    inst = make_instance(metric, Z2, [(int(b),) for b in ones])
    assert construct_nbp(Z2, inst.coeffs, metric).cost == solve(inst).cost


@settings(max_examples=200, deadline=None)
@given(
    instances(
        st.sampled_from(
            [
                group(int_factor(), z2_factor()),
                group(int_factor(2), int_factor(), z2_factor(3)),
                group(z2_factor(), int_factor(), z2_factor(), int_factor()),
            ]
        ),
        2,
        10,
    )
)
def test_product_constructions_are_optimal(inst):
    plan = construct_nbp(inst.group, inst.coeffs, inst.metric)
    assert check_nbp(plan, inst).nbp
    assert plan.cost == solve(inst).cost
