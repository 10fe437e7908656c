"""Command-line front end.

Every command is deterministic given its inputs and budget flags, prints a
human summary by default or a stable JSON report with ``--json``, and exits
with 0 for success, 1 for refutations or violations, 2 for unknown verdicts
and 3 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time

from .colimit import decompose, pushout
from .deduction import Budget, DEFAULT_BUDGET, entails, make_oracle
from .expr import SpecError
from .metasketch import (
    builtin_sketches,
    check_realization,
    realization_from_dict,
    realization_to_dict,
    spec_to_realization,
)
from .models import (
    FinModel,
    check_model,
    enumerate_models,
    load_model,
    model_to_dict,
    models_over,
    pass_parameter,
    terminal_model,
)
from .morphism import Morphism, NatTrans
from .parameterize import collapse_param, expand
from .parampass import lax_cocone
from .parser import Parser, parse_file
from .printer import (
    format_morphism,
    format_nat,
    format_spec,
    format_term,
    format_type,
)
from .spec import ParamConstSpec, ParamSpec, Spec, underlying_spec, validate


class UsageError(SpecError):
    pass


def _budget_from(args) -> Budget:
    budget = DEFAULT_BUDGET
    env = os.environ.get("SKETCHFORGE_BUDGET")
    if env:
        fields = {}
        for item in env.split(","):
            key, _, value = item.partition("=")
            fields[key.strip()] = int(value)
        budget = budget.with_overrides(
            max_depth=fields.get("depth"),
            max_iters=fields.get("iters"),
            max_model_size=fields.get("model"))
    return budget.with_overrides(
        max_depth=getattr(args, "max_depth", None),
        max_iters=getattr(args, "max_iters", None),
        max_model_size=getattr(args, "max_model", None))


def _load_spec(args, name_attr="spec"):
    doc = parse_file(args.file)
    wanted = getattr(args, name_attr)
    obj = doc.get(wanted)
    if obj is None or isinstance(obj, (Morphism, NatTrans)):
        raise UsageError(f"no specification named {wanted!r} in {args.file}")
    return doc, obj


def _parse_sizes(text: str) -> dict[str, int]:
    out = {}
    for item in text.split(","):
        name, _, num = item.partition("=")
        if not num:
            raise UsageError(f"bad --size entry {item!r}; use Name=N")
        out[name.strip()] = int(num)
    return out


def _parse_goal(spec: Spec, text: str):
    parser = Parser(f"goal : {text}")
    eq = parser.parse_equation(spec)
    if parser.peek().kind != "eof":
        tok = parser.peek()
        raise UsageError(f"trailing input in goal at {tok.text!r}")
    return eq.lhs, eq.rhs


# ---------------------------------------------------------------------------
# Command handlers: each returns (exit_code, payload, human_text)


def cmd_check(args):
    doc = parse_file(args.file)
    reports = {}
    bad = False
    for name, obj in doc:
        if isinstance(obj, (Morphism, NatTrans)):
            continue
        if args.spec and name != args.spec:
            continue
        problems = validate(underlying_spec(obj))
        reports[name] = [str(p) for p in problems]
        bad = bad or bool(problems)
    lines = []
    for name, problems in reports.items():
        if problems:
            lines.append(f"{name}: {len(problems)} problem(s)")
            lines.extend(f"  {p}" for p in problems)
        else:
            lines.append(f"{name}: ok")
    return (1 if bad else 0), {"reports": reports}, "\n".join(lines)


def cmd_entail(args):
    _doc, obj = _load_spec(args)
    spec = underlying_spec(obj)
    lhs, rhs = _parse_goal(spec, args.goal)
    verdict = entails(spec, lhs, rhs, _budget_from(args))
    payload = {"verdict": verdict.status}
    lines = [f"{verdict.status}: {format_term(lhs)} == {format_term(rhs)}"]
    if verdict.is_refuted and verdict.model is not None:
        payload["countermodel"] = model_to_dict(verdict.model)
        lines.append("countermodel:")
        lines.append(json.dumps(model_to_dict(verdict.model), sort_keys=True))
    if args.trace and verdict.trace:
        payload["trace"] = list(verdict.trace)
        lines.append("trace:")
        lines.extend(f"  {step}" for step in verdict.trace)
    code = {"proven": 0, "refuted": 1, "unknown": 2}[verdict.status]
    return code, payload, "\n".join(lines)


def cmd_expand(args):
    _doc, obj = _load_spec(args)
    spec = underlying_spec(obj)
    x = expand(spec, param_name=args.param_name)
    text = format_spec(x.expanded, f"{args.spec}{x.param}")
    payload = {"expanded": text, "param": x.param,
               "primes": dict(x.prime_names)}
    if args.emit_ta:
        t_a = collapse_param(x)
        mtext = format_morphism(t_a, "collapse", f"{args.spec}{x.param}",
                                args.spec)
        text = text + "\n" + mtext
        payload["collapse"] = mtext
    return 0, payload, text.rstrip("\n")


def cmd_add_param(args):
    from .parampass import add_parameter
    _doc, obj = _load_spec(args)
    if isinstance(obj, ParamConstSpec):
        raise UsageError(f"{args.spec!r} already has a parameter constant")
    if isinstance(obj, ParamSpec):
        p = obj
    else:
        p = expand(underlying_spec(obj), param_name=args.param_name).expanded
    wp = add_parameter(p)
    name = f"{args.spec}a"
    text = format_spec(wp.spec, name)
    text += "\n" + format_morphism(wp.include, "include", args.spec, name)
    return 0, {"extended": format_spec(wp.spec, name)}, text.rstrip("\n")


def cmd_passing(args):
    _doc, obj = _load_spec(args)
    spec = underlying_spec(obj)
    c = lax_cocone(spec)
    name_a = f"{args.spec}A"
    name_ta = f"{args.spec}a"
    parts = [
        format_spec(c.expansion.expanded, name_a),
        format_spec(c.extended, name_ta),
        format_morphism(c.base, "collapse", name_a, args.spec),
        format_morphism(c.leg_param, "includeParam", name_a, name_ta),
        format_morphism(c.leg_source, "passing", args.spec, name_ta),
        format_nat(c.cell, "cell", "passingAfterCollapse", "includeParam"),
    ]
    text = "\n".join(parts)
    return 0, {"document": text}, text.rstrip("\n")


def cmd_pushout(args):
    doc = parse_file(args.file)
    legs = []
    for name in (args.left, args.right):
        m = doc.get(name)
        if not isinstance(m, Morphism):
            raise UsageError(f"no morphism named {name!r} in {args.file}")
        legs.append(m)
    po = pushout(legs[0], legs[1])
    text = format_spec(po.spec, "Pushout")
    text += "\n" + format_morphism(po.left, "left", "LeftTarget", "Pushout")
    text += "\n" + format_morphism(po.right, "right", "RightTarget", "Pushout")
    return 0, {"pushout": format_spec(po.spec, "Pushout")}, text.rstrip("\n")


def cmd_decompose(args):
    _doc, obj = _load_spec(args)
    spec = underlying_spec(obj)
    d = decompose(spec)
    kinds: dict[str, int] = {}
    for node in d.nodes.values():
        kinds[node.kind] = kinds.get(node.kind, 0) + 1
    payload = {
        "nodes": {nid: node.kind for nid, node in d.nodes.items()},
        "kind_counts": kinds,
        "edge_count": len(d.edges),
    }
    lines = [f"{len(d.nodes)} nodes, {len(d.edges)} edges"]
    for kind in sorted(kinds):
        lines.append(f"  {kind}: {kinds[kind]}")
    return 0, payload, "\n".join(lines)


def cmd_models(args):
    _doc, obj = _load_spec(args)
    spec = underlying_spec(obj)
    fixed = load_model(args.fix) if args.fix else None
    sizes = _parse_sizes(args.size) if args.size else {}
    fixed_carriers = dict(fixed.carriers) if fixed else {}
    fixed_tables = dict(fixed.tables) if fixed else {}
    found = list(enumerate_models(spec, fixed_carriers=fixed_carriers,
                                  free_sizes=sizes,
                                  fixed_tables=fixed_tables))
    payload = {"count": len(found),
               "models": [model_to_dict(m) for m in found]}
    lines = [f"{len(found)} model(s)"]
    if not args.count_only:
        for i, m in enumerate(found):
            lines.append(f"model {i}: "
                         + json.dumps(model_to_dict(m), sort_keys=True))
    return 0, payload, "\n".join(lines)


def cmd_exact_param(args):
    _doc, obj = _load_spec(args)
    spec = underlying_spec(obj)
    m0 = load_model(args.pure_model)
    x = expand(spec, param_name=args.param_name)
    term = terminal_model(spec, m0, param_name=x.param)
    fibre = list(models_over(spec, m0, spec.pure_subspec()))
    carrier = term.carriers[x.param]
    table = []
    for alpha in carrier:
        model, _mor = pass_parameter(spec, term, alpha, param_name=x.param)
        table.append({"argument": repr(alpha),
                      "model": model_to_dict(model)})
    bijective = len(carrier) == len(fibre) and len(
        {json.dumps(row["model"], sort_keys=True) for row in table}
    ) == len(fibre)
    payload = {
        "carrier_size": len(carrier),
        "model_count": len(fibre),
        "bijective": bijective,
        "table": table,
    }
    lines = [f"|carrier({x.param})| = {len(carrier)}",
             f"models over the pure part = {len(fibre)}",
             f"parameter passing bijective: {bijective}"]
    return (0 if bijective else 1), payload, "\n".join(lines)


def cmd_terminal(args):
    _doc, obj = _load_spec(args)
    spec = underlying_spec(obj)
    m0 = load_model(args.pure_model)
    term = terminal_model(spec, m0, param_name=args.param_name)
    payload = {"model": model_to_dict(term)}
    return 0, payload, json.dumps(model_to_dict(term), sort_keys=True,
                                  indent=2)


def cmd_realize(args):
    _doc, obj = _load_spec(args)
    spec = underlying_spec(obj)
    r = spec_to_realization(spec)
    problems = check_realization(r)
    payload = {"realization": realization_to_dict_printable(r),
               "violations": [str(p) for p in problems]}
    lines = []
    for point in r.over.points:
        elems = r.point_sets[point]
        lines.append(f"{point} ({len(elems)}): "
                     + ", ".join(_show_element(e) for e in elems))
    lines.extend(str(p) for p in problems)
    return (1 if problems else 0), payload, "\n".join(lines)


def _show_element(e) -> str:
    from .expr import TermExpr, TypeExpr
    if isinstance(e, TypeExpr):
        return format_type(e)
    if isinstance(e, TermExpr):
        return format_term(e)
    if isinstance(e, tuple):
        return "(" + ", ".join(_show_element(x) for x in e) + ")"
    return str(e)


def realization_to_dict_printable(r) -> dict:
    return {point: [_show_element(e) for e in elems]
            for point, elems in r.point_sets.items()}


def cmd_check_realization(args):
    with open(args.realization, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    r = realization_from_dict(data)
    problems = check_realization(r)
    payload = {"violations": [str(p) for p in problems]}
    text = "\n".join(str(p) for p in problems) if problems else "ok"
    return (1 if problems else 0), payload, text


# ---------------------------------------------------------------------------
# Argument parsing


def _add_budget_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-depth", type=int, default=None,
                   help="extra term depth allowed during saturation")
    p.add_argument("--max-iters", type=int, default=None,
                   help="saturation rounds")
    p.add_argument("--max-model", type=int, default=None,
                   help="largest carrier size in countermodel search")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="sketchforge",
        description="workbench for equational specifications")
    top.add_argument("--json", action="store_true",
                     help="machine-readable output")
    top.add_argument("--seed", type=int, default=0,
                     help="seed for any randomized search order")
    top.add_argument("--jobs", type=int, default=1,
                     help="worker count for enumeration (order unaffected)")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate the specifications in a file")
    p.add_argument("file")
    p.add_argument("spec", nargs="?", default=None)
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("entail", help="decide an equation under a spec")
    p.add_argument("file")
    p.add_argument("spec")
    p.add_argument("--goal", required=True,
                   help="equation, e.g. 'p . s == id[N]' or sugared form")
    p.add_argument("--trace", action="store_true")
    _add_budget_flags(p)
    p.set_defaults(handler=cmd_entail)

    p = sub.add_parser("expand", help="parameterize a decorated spec")
    p.add_argument("file")
    p.add_argument("spec")
    p.add_argument("--param-name", default="A")
    p.add_argument("--emit-tA", dest="emit_ta", action="store_true",
                   help="also print the collapse morphism")
    p.set_defaults(handler=cmd_expand)

    p = sub.add_parser("add-param", help="adjoin a parameter constant")
    p.add_argument("file")
    p.add_argument("spec")
    p.add_argument("--param-name", default="A")
    p.set_defaults(handler=cmd_add_param)

    p = sub.add_parser("passing",
                       help="print the parameter-passing constructions")
    p.add_argument("file")
    p.add_argument("spec")
    p.set_defaults(handler=cmd_passing)

    p = sub.add_parser("pushout", help="pushout of two morphisms in a file")
    p.add_argument("file")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(handler=cmd_pushout)

    p = sub.add_parser("decompose",
                       help="decompose into elementary specifications")
    p.add_argument("file")
    p.add_argument("spec")
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser("models", help="enumerate finite models")
    p.add_argument("file")
    p.add_argument("spec")
    p.add_argument("--size", default=None, help="carrier sizes, e.g. X=2,Y=3")
    p.add_argument("--fix", default=None,
                   help="JSON model file fixing carriers and tables")
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(handler=cmd_models)

    p = sub.add_parser("exact-param",
                       help="terminal-model bijection over a pure model")
    p.add_argument("file")
    p.add_argument("spec")
    p.add_argument("--pure-model", required=True)
    p.add_argument("--param-name", default="A")
    p.set_defaults(handler=cmd_exact_param)

    p = sub.add_parser("terminal",
                       help="terminal model of the expansion over a pure model")
    p.add_argument("file")
    p.add_argument("spec")
    p.add_argument("--pure-model", required=True)
    p.add_argument("--param-name", default="A")
    p.set_defaults(handler=cmd_terminal)

    p = sub.add_parser("realize",
                       help="encode a spec as a sketch realization")
    p.add_argument("file")
    p.add_argument("spec")
    p.set_defaults(handler=cmd_realize)

    p = sub.add_parser("check-realization",
                       help="check a JSON realization of the builtin sketch")
    p.add_argument("realization")
    p.set_defaults(handler=cmd_check_realization)

    return top


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 3 if exc.code not in (0, None) else 0
    random.seed(args.seed)
    started = time.perf_counter()
    try:
        code, payload, text = args.handler(args)
    except (SpecError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    elapsed_ms = round((time.perf_counter() - started) * 1000, 3)
    if args.json:
        status = {0: "ok", 1: "refuted", 2: "unknown"}.get(code, "error")
        report = {"status": status, "payload": payload,
                  "timingMs": elapsed_ms}
        print(json.dumps(report, sort_keys=True))
    else:
        if text:
            print(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
