from fractions import Fraction
import pytest
from helpers.codec import (
    chain_from_json,
    element_from_json,
    group_from_json,
    instance_from_json,
    load_json,
    plan_from_json,
    plan_to_json,
    trees_from_json,
)
from helpers.common import digest, format_scalar, jsonable, parse_int, parse_scalar, process_data
from helpers.solver import solve
from models.enums import ExitCode
from models.errors import ParseError, ShapeMismatch, TriangleViolation
from models.group import group, int_factor, mod_factor, z2_factor


def test_parse_scalar():
    assert parse_scalar("3/4") == Fraction(3, 4)
    assert parse_scalar(" 2 ") == 2
    assert parse_scalar(5) == 5
    for bad in (0.5, True, "x", "1/0", None):
        with pytest.raises(ParseError):
            parse_scalar(bad)


def test_format_and_jsonable():
    assert format_scalar(Fraction(6, 4)) == "3/2"
    assert format_scalar(Fraction(4, 2)) == "2"
    assert jsonable({"a": (Fraction(1, 2), ExitCode.BUDGET), (1, 2): {3}}) == {
        "a": ["1/2", 3],
        "[1, 2]": [3],
    }
    assert jsonable(0.25) == 0.25
    with pytest.raises(TypeError):
        jsonable(object())


def test_digest_is_key_order_independent():
    assert digest({"a": 1, "b": [Fraction(1, 3)]}) == digest({"b": ["1/3"], "a": 1})
    assert digest({"a": 1}) != digest({"a": 2})


def test_process_data_times_the_call():
    result, elapsed = process_data(sum, [1, 2, 3])
    assert result == 6
    assert elapsed >= 0


def test_group_from_json():
    spec = group_from_json(
        {"factors": [{"kind": "Z", "weight": "3/2"}, {"kind": "Z2"}, {"kind": "Zmod", "moduli": [4], "norm_table": [0, 1, 2, 1]}]}
    )
    assert spec == group(int_factor(Fraction(3, 2)), z2_factor(), mod_factor(4, (0, 1, 2, 1)))
    with pytest.raises(ParseError):
        group_from_json({"factors": [{"kind": "Q"}]})
    with pytest.raises(ParseError):
        group_from_json({})


def test_element_from_json():
    klein = group_from_json({"factors": [{"kind": "Zmod", "moduli": [2, 2], "norm_table": [0, 1, 1, 2]}]})
    assert element_from_json(klein, [[1, 0]]) == ((1, 0),)
    z = group(int_factor())
    assert element_from_json(z, 3) == (3,)
    with pytest.raises(ParseError):
        element_from_json(z, "1/2")
    with pytest.raises(ShapeMismatch):
        element_from_json(group(int_factor(), z2_factor()), [1])


def test_instance_and_plan_files(tmp_path):
    data = {
        "group": {"factors": [{"kind": "Z2"}]},
        "metric": {"kind": "points", "p": "linf", "coords": [[0, 0], [1, 1], [5, 0], [5, 1]]},
        "coefficients": [1, 1, 1, 1],
    }
    inst = instance_from_json(data)
    assert inst.metric.dist(0, 1) == 1
    plan = solve(inst)
    restored = plan_from_json(inst.group, plan_to_json(plan))
    assert restored.entries == plan.entries
    assert restored.cost == plan.cost == 2
    bad = dict(data, metric={"kind": "matrix", "d": [[0, 1, 3], [1, 0, 1], [3, 1, 0]]}, coefficients=[1, 1, 0])
    with pytest.raises(TriangleViolation):
        instance_from_json(bad)


def test_load_json_errors(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"a": ')
    with pytest.raises(ParseError) as info:
        load_json(str(path))
    assert info.value.witness["line"] == 1
    with pytest.raises(ParseError):
        load_json(str(tmp_path / "missing.json"))


def test_chain_from_json_flips_edges():
    chain = chain_from_json(
        {
            "group": {"factors": [{"kind": "Z"}]},
            "metric": {"kind": "matrix", "d": [[0, 1], [1, 0]]},
            "boundary_set": [0, 1],
            "edges": [{"u": 1, "v": 0, "coeff": 2}],
        }
    )
    assert chain.edges == ((0, 1, (-2,)),)


def test_parse_int():
    assert parse_int("4") == 4
    assert parse_int(Fraction(6, 2)) == 3
    for bad in ("x", "1/2", 2.0, [1]):
        with pytest.raises(ParseError):
            parse_int(bad)


def test_tree_file_errors():
    good = {"trees": [{"edges": [[0, 1, "1/2"]], "map": [0, 1]}]}
    tree, tmap = trees_from_json(good)[0]
    assert tree.distance(0, 1) == Fraction(1, 2)
    assert tmap == (0, 1)
    for bad in (
        {"trees": {}},
        {"trees": [{"edges": [[0, 1]], "map": [0, 1]}]},
        {"trees": [{"edges": [[0, "b", 1]], "map": [0, 1]}]},
        {"trees": [{"edges": [[0, 1, 1]], "map": "01"}]},
    ):
        with pytest.raises(ParseError):
            trees_from_json(bad)
