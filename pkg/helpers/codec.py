import json
from typing import Any, Dict, List, Sequence, Tuple
from helpers.common import format_scalar, jsonable, parse_int, parse_scalar
from helpers.calibration import TreeCandidate, make_tree
from helpers.chain import make_chain
from helpers.group import check_element
from helpers.metric import make_instance, metric_from_matrix, metric_from_points
from models.chain import PolyChain1
from models.enums import FactorKind, PointNorm
from models.errors import ParseError, ShapeMismatch
from models.group import (
    Coord,
    FactorSpec,
    GroupElement,
    GroupSpec,
    int_factor,
    mod_factor,
    power_factor,
    real_factor,
    z2_factor,
)
from models.metric import FiniteMetric, Instance
from models.plan import TransportPlan


def load_json(path: str) -> Any:
    """
    Read a JSON file; syntax errors become ParseError with their location.
    """
    try:
        with open(path, "r") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(
            f"{path}: {e.msg} at line {e.lineno} column {e.colno}",
            {"file": path, "line": e.lineno, "column": e.colno},
        )
    except OSError as e:
        raise ParseError(f"Cannot read {path}: {e.strerror}", {"file": path})


def _field(data: Dict, key: str, where: str) -> Any:
    if not isinstance(data, dict) or key not in data:
        raise ParseError(f"Missing '{key}' in {where}")
    return data[key]


def _list(data: Dict, key: str, where: str) -> List:
    value = _field(data, key, where)
    if not isinstance(value, list):
        raise ParseError(f"'{key}' in {where} must be a list, got {type(value).__name__}")
    return value


def _rows(data: Dict, key: str, where: str) -> List[List]:
    rows = _list(data, key, where)
    if not all(isinstance(row, list) for row in rows):
        raise ParseError(f"'{key}' in {where} must be a list of lists")
    return rows


def factor_from_json(data: Dict) -> FactorSpec:
    kind = _field(data, "kind", "factor")
    if kind == "Z":
        return int_factor(parse_scalar(data.get("weight", "1")))
    if kind == "R":
        return real_factor(parse_scalar(data.get("weight", "1")))
    if kind == "Rpow":
        exponent = parse_scalar(_field(data, "exponent", "power factor"))
        return power_factor(exponent, parse_scalar(data.get("weight", "1")))
    if kind == "Z2":
        return z2_factor(parse_scalar(data.get("weight", "1")))
    if kind == "Zmod":
        moduli = [parse_int(m, "modulus") for m in _list(data, "moduli", "Zmod factor")]
        table = [parse_scalar(v) for v in _list(data, "norm_table", "Zmod factor")]
        return mod_factor(moduli, table)
    raise ParseError(f"Unknown factor kind: {kind!r}")


def factor_to_json(f: FactorSpec) -> Dict:
    if f.kind is FactorKind.ZMOD:
        return {
            "kind": "Zmod",
            "moduli": list(f.moduli),
            "norm_table": [format_scalar(v) for v in f.norm_table],
        }
    if f.kind is FactorKind.POWER:
        return {"kind": f.kind.value, "weight": format_scalar(f.weight), "exponent": format_scalar(f.exponent)}
    return {"kind": f.kind.value, "weight": format_scalar(f.weight)}


def group_from_json(data: Dict) -> GroupSpec:
    factors = _field(data, "factors", "group")
    if not isinstance(factors, list):
        raise ParseError("'factors' must be a list")
    return GroupSpec(tuple(factor_from_json(f) for f in factors))


def group_to_json(spec: GroupSpec) -> Dict:
    return {"factors": [factor_to_json(f) for f in spec.factors]}


def _coord_from_json(f: FactorSpec, value: Any) -> Coord:
    if f.kind in (FactorKind.R, FactorKind.POWER):
        return parse_scalar(value)
    if f.kind is FactorKind.ZMOD and len(f.moduli) > 1:
        if not isinstance(value, list):
            raise ParseError(f"Expected a residue list for {f.label}, got {value!r}")
        return tuple(parse_int(r, f"residue for {f.label}") for r in value)
    return parse_int(value, f"coordinate for {f.label}")


def element_from_json(spec: GroupSpec, value: Any) -> GroupElement:
    """
    Parse a coordinate list; a bare scalar is accepted for single-factor groups.
    """
    if not isinstance(value, list) or (len(spec.factors) == 1 and len(value) != 1):
        value = [value]
    if len(value) != len(spec.factors):
        raise ShapeMismatch(f"Element {value} does not match group {spec.label}")
    element = tuple(_coord_from_json(f, c) for f, c in zip(spec.factors, value))
    check_element(spec, element)
    return element


def element_to_json(x: GroupElement) -> List:
    return jsonable(list(x))


def metric_from_json(data: Dict) -> FiniteMetric:
    kind = _field(data, "kind", "metric")
    if kind == "matrix":
        return metric_from_matrix([[parse_scalar(v) for v in row] for row in _rows(data, "d", "metric")])
    if kind == "points":
        try:
            p = PointNorm(data.get("p", "l1"))
        except ValueError:
            raise ParseError(f"Unknown point norm: {data.get('p')!r}")
        coords = [[parse_scalar(v) for v in pt] for pt in _rows(data, "coords", "metric")]
        return metric_from_points(coords, p)
    raise ParseError(f"Unknown metric kind: {kind!r}")


def metric_to_json(metric: FiniteMetric) -> Dict:
    return {"kind": "matrix", "d": [[format_scalar(v) for v in row] for row in metric.d]}


def instance_from_json(data: Dict) -> Instance:
    spec = group_from_json(_field(data, "group", "instance"))
    metric = metric_from_json(_field(data, "metric", "instance"))
    coeffs = [element_from_json(spec, c) for c in _list(data, "coefficients", "instance")]
    return make_instance(metric, spec, coeffs)


def instance_to_json(inst: Instance) -> Dict:
    return {
        "group": group_to_json(inst.group),
        "metric": metric_to_json(inst.metric),
        "coefficients": [element_to_json(g) for g in inst.coeffs],
    }


def plan_to_json(plan: TransportPlan) -> Dict:
    return {
        "entries": [[element_to_json(x) for x in row] for row in plan.entries],
        "cost": format_scalar(plan.cost) if plan.cost is not None else None,
        "method": plan.method,
    }


def plan_from_json(spec: GroupSpec, data: Dict) -> TransportPlan:
    entries = _rows(data, "entries", "plan")
    rows = tuple(tuple(element_from_json(spec, x) for x in row) for row in entries)
    cost = data.get("cost")
    return TransportPlan(
        spec, rows, parse_scalar(cost) if cost is not None else None, data.get("method", "file")
    )


def chain_from_json(data: Dict) -> PolyChain1:
    spec = group_from_json(_field(data, "group", "chain"))
    metric = metric_from_json(_field(data, "metric", "chain"))
    edges = [
        (
            parse_int(_field(e, "u", "edge"), "vertex"),
            parse_int(_field(e, "v", "edge"), "vertex"),
            element_from_json(spec, _field(e, "coeff", "edge")),
        )
        for e in _list(data, "edges", "chain")
    ]
    boundary_set = [parse_int(b, "vertex") for b in _list(data, "boundary_set", "chain")]
    return make_chain(metric, spec, boundary_set, edges)


def chain_to_json(S: PolyChain1) -> Dict:
    return {
        "group": group_to_json(S.group),
        "metric": metric_to_json(S.metric),
        "boundary_set": sorted(S.boundary_set),
        "edges": [{"u": u, "v": w, "coeff": element_to_json(c)} for u, w, c in S.edges],
    }


def trees_from_json(data: Dict) -> List[TreeCandidate]:
    out = []
    for item in _list(data, "trees", "tree file"):
        edges = []
        for edge in _rows(item, "edges", "tree"):
            if len(edge) != 3:
                raise ParseError(f"Tree edge {edge!r} must be [u, v, length]")
            u, v, length = edge
            edges.append((parse_int(u, "tree vertex"), parse_int(v, "tree vertex"), parse_scalar(length)))
        size = item.get("size")
        tree = make_tree(
            edges,
            root=parse_int(item.get("root", 0), "tree root"),
            size=parse_int(size, "tree size") if size is not None else None,
        )
        out.append((tree, tuple(parse_int(v, "tree vertex") for v in _list(item, "map", "tree"))))
    return out


def trees_to_json(candidates: Sequence[Tuple]) -> Dict:
    return {
        "trees": [
            {
                "edges": [[u, v, format_scalar(length)] for u, v, length in tree.edges],
                "root": tree.root,
                "size": len(tree.vertices),
                "map": list(tmap),
            }
            for tree, tmap in candidates
        ]
    }
