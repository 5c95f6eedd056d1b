import json
import random
from typing import Any, Callable, Dict, List, Optional, Tuple
import click
from tabulate import tabulate
from constants import DEFAULT_BUDGET, DEFAULT_MAX_ORDER, DEFAULT_N_MAX, VERSION
from helpers.calibration import calibration_value, certify, converse_check, kantorovich_dual
from helpers.chain import mass, simplify
from helpers.codec import (
    chain_from_json,
    chain_to_json,
    element_from_json,
    element_to_json,
    group_from_json,
    instance_from_json,
    load_json,
    plan_from_json,
    plan_to_json,
    trees_from_json,
    trees_to_json,
)
from helpers.common import digest, format_scalar, jsonable, parse_scalar, process_data
from helpers.czt import classify_groups, czt_norm_feasibility, has_czt
from helpers.group import ball, enumerate_elements, norm, validate_norm
from helpers.logger import Logger
from helpers.metric import project
from helpers.nbp import check_nbp, construct_nbp, find_nbp_counterexample
from helpers.solver import solve_flow
from helpers.structure import (
    is_indecomposable,
    list_indecomposables,
    verify_indecomposable_laws,
    verify_pairwise_l1,
)
from models.enums import ExitCode, FactorKind
from models.errors import GroupOTError, InvalidInputError, ParseError, SameSubgroup
from models.group import GroupElement, GroupSpec
from models.methods import SolveMethod
from models.report import RunReport

logger = Logger("cli")

Outcome = Tuple[Dict[str, Any], List[Dict[str, Any]], ExitCode]


def _write(path: Optional[str], data: Any) -> None:
    if path:
        with open(path, "w") as f:
            json.dump(jsonable(data), f, indent=2, sort_keys=True)


def _print_human(report: RunReport) -> None:
    rows = []
    for key, value in report.results.items():
        shown = value if isinstance(value, (str, int, bool)) or value is None else json.dumps(jsonable(value))
        rows.append([key, shown])
    click.echo(tabulate(rows, headers=["result", "value"], tablefmt="github"))
    for witness in report.witnesses:
        click.echo(f"witness: {json.dumps(jsonable(witness), sort_keys=True)}")
    click.echo(f"exit code {int(report.exit_code)} ({report.exit_code.name}), {report.timing:.3f}s")


def run(ctx: click.Context, command: str, inputs: Any, func: Callable[[], Outcome]) -> None:
    """
    Execute one command, convert errors to exit codes and emit the report.

    Args:
        ctx (click.Context): Carries the global flags.
        command (str): Subcommand name.
        inputs (Any): Raw command inputs, digested for the report.
        func (Callable[[], Outcome]): The command body.
    """
    report = RunReport(command, digest({"command": command, "inputs": inputs}), VERSION)
    try:
        (results, witnesses, code), report.timing = process_data(func)
        report.results, report.witnesses, report.exit_code = results, witnesses, code
    except GroupOTError as e:
        logger.error(f"{type(e).__name__}: {e}")
        report.results = {"error": type(e).__name__, "message": str(e)}
        report.witnesses = [e.witness] if e.witness else []
        report.exit_code = e.exit_code
    if ctx.obj["json"]:
        click.echo(json.dumps(jsonable(report.to_dict()), sort_keys=True))
    else:
        _print_human(report)
    ctx.exit(int(report.exit_code))


def _safe_load(path: str) -> Any:
    try:
        return load_json(path)
    except GroupOTError:
        return {"unreadable": path}


@click.group()
@click.version_option(VERSION)
@click.option("--budget", type=int, default=DEFAULT_BUDGET, show_default=True, help="Search node budget.")
@click.option("--json", "as_json", is_flag=True, help="Emit the report as JSON.")
@click.option("--seed", type=int, default=None, help="Seed for sampled inputs (defaults to the input digest).")
@click.pass_context
def cli(ctx: click.Context, budget: int, as_json: bool, seed: Optional[int]) -> None:
    """Exact optimal transport with normed Abelian group coefficients."""
    ctx.ensure_object(dict)
    ctx.obj.update({"budget": budget, "json": as_json, "seed": seed})


@cli.command("solve")
@click.option("-i", "--input", "input_path", required=True, type=click.Path())
@click.option("-o", "--output", "output_path", default=None, type=click.Path())
@click.option(
    "--method",
    type=click.Choice([m.name.lower() for m in SolveMethod]),
    default="auto",
    show_default=True,
)
@click.option("--certify", "certify_dual", is_flag=True, help="Attach Kantorovich potentials for Z and R factors.")
@click.pass_context
def cmd_solve(ctx, input_path, output_path, method, certify_dual):
    def body() -> Outcome:
        inst = instance_from_json(load_json(input_path))
        chosen = SolveMethod[method.upper()].value
        logger.info(f"Solving {inst.n} points over {inst.group.label} with {chosen['name']}")
        plan = chosen["solve"](inst, ctx.obj["budget"])
        results: Dict[str, Any] = {"cost": format_scalar(plan.cost), "method": plan.method, "plan": plan_to_json(plan)}
        witnesses = []
        code = ExitCode.OK
        if certify_dual:
            certificates = []
            for k, f in enumerate(inst.group.factors):
                if f.kind not in (FactorKind.Z, FactorKind.R):
                    continue
                sub = project(inst, k)
                potential = kantorovich_dual(sub)
                primal = solve_flow(sub).cost
                certificates.append(
                    {"factor": k, "potentials": potential.values, "value": potential.value, "gap": primal - potential.value}
                )
                if primal != potential.value:
                    witnesses.append({"factor": k, "primal": primal, "dual": potential.value})
                    code = ExitCode.PROPERTY_FALSE
            results["certificates"] = certificates
        _write(output_path, plan_to_json(plan))
        return results, witnesses, code

    run(ctx, "solve", {"input": _safe_load(input_path), "method": method, "certify": bool(certify_dual)}, body)


@cli.command("check-nbp")
@click.option("-i", "--input", "input_path", required=True, type=click.Path())
@click.option("-p", "--plan", "plan_path", required=True, type=click.Path())
@click.pass_context
def cmd_check_nbp(ctx, input_path, plan_path):
    def body() -> Outcome:
        inst = instance_from_json(load_json(input_path))
        plan = plan_from_json(inst.group, load_json(plan_path))
        report = check_nbp(plan, inst)
        witnesses = [{"row": i, "norm": a, "spread": b} for i, a, b in report.violated_rows]
        if report.cycle_witness:
            witnesses.append({"cycle": report.cycle_witness})
        results = {"nbp": report.nbp, "acyclic": report.acyclic}
        return results, witnesses, ExitCode.OK if report.nbp else ExitCode.PROPERTY_FALSE

    run(ctx, "check-nbp", {"input": _safe_load(input_path), "plan": _safe_load(plan_path)}, body)


@cli.command("construct-nbp")
@click.option("-i", "--input", "input_path", required=True, type=click.Path())
@click.option("-o", "--output", "output_path", default=None, type=click.Path())
@click.option("--metric-aware", is_flag=True, help="Build a cost-optimal nonbranching plan.")
@click.pass_context
def cmd_construct_nbp(ctx, input_path, output_path, metric_aware):
    def body() -> Outcome:
        inst = instance_from_json(load_json(input_path))
        plan = construct_nbp(inst.group, inst.coeffs, inst.metric if metric_aware else None)
        report = check_nbp(plan, inst)
        _write(output_path, plan_to_json(plan))
        results = {"plan": plan_to_json(plan), "nbp": report.nbp, "acyclic": report.acyclic}
        return results, [], ExitCode.OK if report.nbp else ExitCode.PROPERTY_FALSE

    run(ctx, "construct-nbp", {"input": _safe_load(input_path), "metric_aware": metric_aware}, body)


@cli.command("refute-nbp")
@click.option("--group", "group_path", required=True, type=click.Path())
@click.option("--n-max", type=int, default=DEFAULT_N_MAX, show_default=True)
@click.pass_context
def cmd_refute_nbp(ctx, group_path, n_max):
    def body() -> Outcome:
        spec = group_from_json(load_json(group_path))
        found = find_nbp_counterexample(spec, n_max, ctx.obj["budget"])
        if found is None:
            return {"refuted": False, "n_max": n_max}, [], ExitCode.OK
        proof = found.proof
        witness = {
            "coefficients": [element_to_json(g) for g in found.coeffs],
            "search_space": proof.search_space,
            "nodes_visited": proof.nodes_visited,
        }
        return {"refuted": True, "tried": len(found.tried)}, [witness], ExitCode.PROPERTY_FALSE

    run(ctx, "refute-nbp", {"group": _safe_load(group_path), "n_max": n_max}, body)


@cli.command("check-czt")
@click.option("--group", "group_path", required=True, type=click.Path())
@click.pass_context
def cmd_check_czt(ctx, group_path):
    def body() -> Outcome:
        spec = group_from_json(load_json(group_path))
        violation = validate_norm(spec)
        if violation is not None:
            raise InvalidInputError(
                f"Norm violates {violation.axiom} on factor {violation.factor}",
                {"axiom": violation.axiom, "factor": violation.factor, **violation.witness},
            )
        report = has_czt(spec)
        results = {"czt": report.ok, "triples_checked": report.checked}
        if report.ok:
            return results, [], ExitCode.OK
        a, b, c = report.witness
        witness = {"triple": [element_to_json(a), element_to_json(b), element_to_json(c)], "norms": report.norms}
        return results, [witness], ExitCode.PROPERTY_FALSE

    run(ctx, "check-czt", {"group": _safe_load(group_path)}, body)


def _parse_moduli(text: str) -> List[int]:
    try:
        moduli = [int(m) for m in text.split(",") if m.strip()]
    except ValueError:
        raise click.BadParameter(f"Invalid moduli list: {text}")
    if not moduli or any(m < 2 for m in moduli):
        raise click.BadParameter(f"Moduli must be integers >= 2: {text}")
    return moduli


@cli.command("czt-search")
@click.option("--moduli", required=True, help="Comma separated cyclic factors, e.g. 2,4.")
@click.pass_context
def cmd_czt_search(ctx, moduli):
    parsed = _parse_moduli(moduli)

    def body() -> Outcome:
        result = czt_norm_feasibility(parsed, ctx.obj["budget"])
        results = {"moduli": parsed, "feasible": result.feasible, "trace": result.infeasibility_trace}
        if result.feasible:
            results["witness_norm"] = result.witness_norm
            results["family"] = list(result.family_description)
            return results, [], ExitCode.OK
        return results, [result.infeasibility_trace], ExitCode.PROPERTY_FALSE

    run(ctx, "czt-search", {"moduli": parsed}, body)


@cli.command("classify")
@click.option("--max-order", type=int, default=DEFAULT_MAX_ORDER, show_default=True)
@click.pass_context
def cmd_classify(ctx, max_order):
    def body() -> Outcome:
        rows = classify_groups(max_order, ctx.obj["budget"])
        feasible = [
            {"group": r.label, "witness_norm": r.result.witness_norm, "family": list(r.result.family_description)}
            for r in rows
            if r.result.feasible
        ]
        infeasible = [r.label for r in rows if not r.result.feasible]
        inherited = {r.label: r.details["via"] for r in rows if r.details["via"] != "search"}
        if not ctx.obj["json"]:
            table = [
                [r.label, r.details["order"], "yes" if r.result.feasible else "no", r.details["via"]]
                for r in rows
            ]
            click.echo(tabulate(table, headers=["group", "order", "CZT norm", "decided by"], tablefmt="github"))
        results = {"max_order": max_order, "feasible": feasible, "infeasible": infeasible, "inherited": inherited}
        return results, [], ExitCode.OK

    run(ctx, "classify", {"max_order": max_order}, body)


@cli.command("indecomposables")
@click.option("--group", "group_path", required=True, type=click.Path())
@click.option("--radius", default=None, help="Ball radius for infinite groups.")
@click.pass_context
def cmd_indecomposables(ctx, group_path, radius):
    def body() -> Outcome:
        spec = group_from_json(load_json(group_path))
        found = list_indecomposables(spec, parse_scalar(radius) if radius is not None else None, ctx.obj["budget"])
        results = {
            "representatives": [element_to_json(g) for g in found.representatives],
            "orders": list(found.orders),
        }
        return results, [], ExitCode.OK

    run(ctx, "indecomposables", {"group": _safe_load(group_path), "radius": radius}, body)


def _sample_h(spec: GroupSpec, g: GroupElement, rng: random.Random, budget: int) -> GroupElement:
    # infinite groups draw from the ball of radius 2|g|
    pool = enumerate_elements(spec) if spec.is_finite else ball(spec, 2 * norm(spec, g), budget)
    return rng.choice(pool)


@cli.command("verify-structure")
@click.option("--group", "group_path", required=True, type=click.Path())
@click.option("--g", "g_text", required=True, help="Indecomposable element as JSON, e.g. [1,0].")
@click.option("--h", "h_text", default=None, help="Second element as JSON; sampled when omitted.")
@click.option("--n", "n_max", type=int, default=8, show_default=True)
@click.pass_context
def cmd_verify_structure(ctx, group_path, g_text, h_text, n_max):
    inputs = {"group": _safe_load(group_path), "g": g_text, "h": h_text, "n": n_max}

    def body() -> Outcome:
        spec = group_from_json(load_json(group_path))
        g = element_from_json(spec, _parse_json_arg(g_text))
        if h_text is not None:
            h = element_from_json(spec, _parse_json_arg(h_text))
        else:
            seed = ctx.obj["seed"] if ctx.obj["seed"] is not None else int(digest(inputs)[:8], 16)
            h = _sample_h(spec, g, random.Random(seed), ctx.obj["budget"])
        laws = verify_indecomposable_laws(spec, g, h, n_max, ctx.obj["budget"])
        results: Dict[str, Any] = {
            "g": element_to_json(g),
            "h": element_to_json(h),
            "laws_ok": laws.ok,
            "minimizer": laws.minimizer,
            "residual": element_to_json(laws.residual) if laws.residual is not None else None,
        }
        witnesses = [] if laws.ok else [{"law": laws.failed_law, **laws.witness}]
        ok = laws.ok
        if is_indecomposable(spec, h, ctx.obj["budget"])[0]:
            try:
                pairwise = verify_pairwise_l1(spec, g, h, n_max, ctx.obj["budget"])
                results["pairwise_ok"] = pairwise.ok
                if not pairwise.ok:
                    witnesses.append({"law": pairwise.failed_law, **pairwise.witness})
                    ok = False
            except SameSubgroup:
                results["pairwise_ok"] = None
        return results, witnesses, ExitCode.OK if ok else ExitCode.PROPERTY_FALSE

    run(ctx, "verify-structure", inputs, body)


def _parse_json_arg(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid JSON argument {text!r}: {e.msg}")


@cli.command("simplify")
@click.option("-i", "--input", "input_path", required=True, type=click.Path())
@click.option("-o", "--output", "output_path", default=None, type=click.Path())
@click.option("--trace", is_flag=True, help="Report the mass after every elimination.")
@click.pass_context
def cmd_simplify(ctx, input_path, output_path, trace):
    def body() -> Outcome:
        chain = chain_from_json(load_json(input_path))
        result, steps = simplify(chain)
        _write(output_path, chain_to_json(result))
        results: Dict[str, Any] = {
            "mass_before": mass(chain),
            "mass_after": mass(result),
            "eliminations": len(steps),
            "chain": chain_to_json(result),
        }
        if trace:
            results["trace"] = [
                {"vertex": s.vertex, "mass_before": s.mass_before, "mass_after": s.mass_after} for s in steps
            ]
        return results, [], ExitCode.OK

    run(ctx, "simplify", {"input": _safe_load(input_path), "trace": trace}, body)


@cli.command("calibrate")
@click.option("-i", "--input", "input_path", required=True, type=click.Path())
@click.option("--trees", "trees_path", default=None, type=click.Path())
@click.pass_context
def cmd_calibrate(ctx, input_path, trees_path):
    def body() -> Outcome:
        inst = instance_from_json(load_json(input_path))
        if trees_path is not None:
            candidates = trees_from_json(load_json(trees_path))
            value = calibration_value(inst, candidates)
            cost = SolveMethod.AUTO.value["solve"](inst, ctx.obj["budget"]).cost
            potentials = None
        else:
            cert = certify(inst)
            candidates = list(zip(cert.trees, cert.maps))
            value, cost = cert.value, cert.cost
            potentials = [p.values if p is not None else None for p in cert.potentials]
        results: Dict[str, Any] = {
            "value": value,
            "cost": cost,
            "gap": cost - value,
            "potentials": potentials,
            "trees": trees_to_json(candidates),
        }
        if value != cost:
            return results, [{"value": value, "cost": cost}], ExitCode.PROPERTY_FALSE
        report = converse_check(inst, candidates)
        results["nbp"] = report.nbp
        results["acyclic"] = report.acyclic
        return results, [], ExitCode.OK

    run(ctx, "calibrate", {"input": _safe_load(input_path), "trees": _safe_load(trees_path) if trees_path else None}, body)


if __name__ == "__main__":
    cli(obj={})
