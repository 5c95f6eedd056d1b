from fractions import Fraction
from hypothesis import given, settings, strategies as st
from helpers.fme import eliminate, is_feasible, lexmin, substitute_equalities
from helpers.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, linprog_exact, rank

F = Fraction


def test_linprog_maximizes_over_a_box():
    result = linprog_exact([1, 1], A_ub=[[1, 0], [0, 1]], b_ub=[1, 2], maximize=True)
    assert result.status == OPTIMAL
    assert result.value == 3
    assert result.x == [1, 2]


def test_linprog_with_equalities():
    result = linprog_exact([1, 2], A_eq=[[1, 1]], b_eq=[F(5, 2)])
    assert result.status == OPTIMAL
    assert result.x == [F(5, 2), 0]
    assert result.value == F(5, 2)


def test_linprog_free_variables():
    result = linprog_exact([1], A_ub=[[-1]], b_ub=[2], free=True)
    assert result.status == OPTIMAL
    assert result.x == [-2]


def test_linprog_infeasible_and_unbounded():
    assert linprog_exact([1], A_ub=[[1]], b_ub=[-1]).status == INFEASIBLE
    assert linprog_exact([-1]).status == UNBOUNDED


def test_linprog_drops_redundant_equalities():
    result = linprog_exact([1, 1], A_eq=[[1, 1], [2, 2]], b_eq=[1, 2])
    assert result.status == OPTIMAL
    assert result.value == 1


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(1, 6), min_size=2, max_size=4),
    st.lists(st.integers(-3, 3), min_size=4, max_size=4),
)
def test_linprog_box_optimum_is_the_sum_of_positive_parts(upper, c):
    c = c[: len(upper)]
    n = len(upper)
    A_ub = [[1 if k == i else 0 for k in range(n)] for i in range(n)]
    result = linprog_exact(c, A_ub=A_ub, b_ub=upper, maximize=True)
    assert result.status == OPTIMAL
    assert result.value == sum(max(ci, 0) * ui for ci, ui in zip(c, upper))


def test_rank():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[1, 0], [0, 1], [1, 1]]) == 2
    assert rank([]) == 0


def row(coeffs, rhs):
    return tuple(F(a) for a in coeffs), F(rhs)


def test_eliminate_projects_out_a_variable():
    rows = eliminate([row((1, 1), 2), row((-1, 0), 0)], 0)
    assert rows == [row((0, 1), 2)]


def test_is_feasible_reports_a_contradiction():
    ok, witness = is_feasible([row((1,), 1), row((-1,), -2)])
    assert not ok
    assert all(a == 0 for a in witness[0]) and witness[1] < 0
    assert is_feasible([row((1,), 2), row((-1,), -2)]) == (True, None)


def test_is_feasible_with_equalities():
    ineqs = [row((-1, 0), -1), row((0, -1), -1)]
    assert is_feasible(ineqs, [row((1, -2), 0)])[0]
    assert not is_feasible(ineqs + [row((1, 0), 1)], [row((0, 1), 0)])[0]


def test_substitute_equalities_counts_free_variables():
    reduced, free = substitute_equalities([row((1, -1, 0), 0)], [row((-1, 0, 0), -1), row((0, 0, -1), -1)])
    assert reduced is not None
    assert free == 2
    assert substitute_equalities([row((0, 0), 1)], [row((1, 0), 1)]) == (None, 0)


def test_lexmin():
    assert lexmin([row((-1, 0), -1), row((1, -1), 0)], 2) == [1, 1]
    assert lexmin([row((-1, 0), -1), row((1, 0), 0)], 2) is None
    # y is unbounded below
    assert lexmin([row((-1, 0), -1)], 2) is None
