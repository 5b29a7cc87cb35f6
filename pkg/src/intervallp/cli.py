"""Command-line interface: ``ilp <command> ...``.

Exit codes: 0 success, 1 property failure, 2 input error, 3 enumeration cap
exceeded or question undecided.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .analysis import (
    FormulaPreconditionError,
    RangeDiscrepancy,
    dualize,
    is_weakly_feasible,
    is_weakly_optimal_fixed,
    optimal_value_range,
    weak_optimality_search,
    weak_witness,
)
from .fixtures import FIXTURES, run_fixture
from .generator import GeneratorConfig
from .harness import DEFAULT_CONFIGS, ORACLES, THEOREMS, verify_theorem
from .intervals import DEFAULT_CAP, EnumerationCapExceeded, format_extended, format_rational, to_rational
from .lp import Infeasible, Optimal, solve
from .model import ProgramFormatError, classify, dump, load, scenario
from .transforms import TRANSFORMS

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNDECIDED = 0, 1, 2, 3


class InputError(Exception):
    pass


def _vec(values) -> list[str]:
    return [format_rational(v) for v in values]


def parse_point(text: str) -> tuple[Fraction, ...]:
    """``"1,1/2,-3"`` or ``"1 1/2 -3"`` or a JSON list of strings."""
    text = text.strip()
    try:
        if text.startswith("["):
            items = json.loads(text)
        else:
            items = [t for t in text.replace(",", " ").split() if t]
        return tuple(to_rational(str(v)) for v in items)
    except (ValueError, TypeError, ZeroDivisionError, json.JSONDecodeError) as e:
        raise InputError(f"bad point {text!r}: {e}") from e


def _indices(items, count: int, names) -> list[int]:
    """1-based indices or names to 0-based indices."""
    out = []
    for tok in items:
        for t in str(tok).split(","):
            t = t.strip()
            if not t:
                continue
            if t in names:
                out.append(names.index(t))
            elif t.isdigit() and 1 <= int(t) <= count:
                out.append(int(t) - 1)
            else:
                raise InputError(f"no variable or row {t!r}")
    return out


def _outcome_json(out) -> dict:
    doc = {"status": out.status}
    if isinstance(out, Optimal):
        doc.update(value=format_rational(out.value), primal=_vec(out.primal), dual=_vec(out.dual))
    elif isinstance(out, Infeasible):
        doc.update(value="+inf", farkas=_vec(out.farkas))
    else:
        doc.update(value="-inf", point=_vec(out.point), ray=_vec(out.ray))
    return doc


def _load(path):
    try:
        return load(path)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e


# -- commands ------------------------------------------------------------------------------

def cmd_solve(args) -> tuple[int, dict]:
    p = _load(args.file)
    if args.scenario:
        try:
            assignment = json.loads(Path(args.scenario).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise InputError(f"cannot read scenario {args.scenario}: {e}") from e
    elif not p.is_crisp:
        raise InputError("program has interval coefficients; pass --scenario")
    else:
        assignment = {}
    try:
        sc = scenario(p, assignment)
    except (KeyError, ValueError) as e:
        raise InputError(str(e)) from e
    out = solve(sc.to_point_lp())
    if p.sense == "max" and not isinstance(out, Optimal):
        flipped = {"infeasible": "-inf", "unbounded": "+inf"}
        doc = _outcome_json(out)
        doc["value"] = flipped[out.status]
        return EXIT_OK, doc
    return EXIT_OK, _outcome_json(out)


def cmd_range(args) -> tuple[int, dict]:
    p = _load(args.file)
    try:
        r = optimal_value_range(p, args.method, args.cap)
    except EnumerationCapExceeded as e:
        return EXIT_UNDECIDED, {"error": str(e)}
    except FormulaPreconditionError as e:
        return EXIT_UNDECIDED, {"error": str(e)}
    except RangeDiscrepancy as e:
        return EXIT_FAIL, {"error": f"discrepancy: {e}"}
    doc = {
        "method": r.method,
        "f_lower": format_extended(r.f_lower),
        "f_upper": format_extended(r.f_upper),
        "witness_lower": r.witness_lower.to_json() if r.witness_lower else None,
        "witness_upper": r.witness_upper.to_json() if r.witness_upper else None,
    }
    if r.outcome_lower is not None:
        doc["outcome_lower"] = _outcome_json(r.outcome_lower)
    if r.outcome_upper is not None:
        doc["outcome_upper"] = _outcome_json(r.outcome_upper)
    return EXIT_OK, doc


def cmd_transform(args) -> tuple[int, dict]:
    p = _load(args.file)
    fn = TRANSFORMS[args.op]
    if args.op == "nonneg" and args.vars:
        q, rec = fn(p, _indices(args.vars, p.n, [v.name for v in p.vars]))
    elif args.op == "split" and (args.rows or args.vars):
        q, rec = fn(p, _indices(args.rows or args.vars, p.m, []))
    else:
        q, rec = fn(p)
    dump(q, args.output)
    cls = classify(q)
    return EXIT_OK, {
        "output": str(args.output),
        "class": cls.kind,
        "fixed_matrix": cls.fixed_matrix,
        "duplicated": rec.duplicated(),
        "record": rec.to_json(),
    }


def cmd_check_feasible(args) -> tuple[int, dict]:
    p = _load(args.file)
    x = parse_point(args.point)
    if len(x) != p.n:
        raise InputError(f"point has {len(x)} entries, program has {p.n} variables")
    ok = is_weakly_feasible(p, x)
    w = weak_witness(p, x) if ok else None
    return EXIT_OK, {"weakly_feasible": ok, "witness": w.to_json() if w else None}


def cmd_check_optimal(args) -> tuple[int, dict]:
    p = _load(args.file)
    x = parse_point(args.point)
    if len(x) != p.n:
        raise InputError(f"point has {len(x)} entries, program has {p.n} variables")
    if p.fixed_matrix:
        ok, cert = is_weakly_optimal_fixed(p, x)
        return EXIT_OK, {
            "weakly_optimal": ok,
            "method": "exact",
            "witness": cert.scenario.to_json() if cert else None,
            "dual": _vec(cert.dual) if cert else None,
        }
    res = weak_optimality_search(p, x, args.search_budget)
    doc = {
        "weakly_optimal": True if res.found else "unknown",
        "method": "endpoint search",
        "examined": res.examined,
        "witness": res.scenario.to_json() if res.found else None,
    }
    return (EXIT_OK if res.found else EXIT_UNDECIDED), doc


def cmd_dualize(args) -> tuple[int, dict]:
    p = _load(args.file)
    d = dualize(p)
    dump(d, args.output)
    return EXIT_OK, {"output": str(args.output), "class": classify(d).kind}


def _dims(text: str | None, base: GeneratorConfig) -> GeneratorConfig:
    if not text:
        return base
    try:
        n, m = (int(t) for t in text.lower().split("x"))
    except ValueError as e:
        raise InputError(f"bad --dims {text!r}; expected VARSxROWS such as 3x2") from e
    try:
        return GeneratorConfig(**{**base.__dict__, "n_vars": n, "n_rows": m,
                                  "min_eq_rows": min(base.min_eq_rows, m)})
    except ValueError as e:
        raise InputError(str(e)) from e


def cmd_verify(args) -> tuple[int, dict]:
    cfg = _dims(args.dims, DEFAULT_CONFIGS[args.theorem])
    report = verify_theorem(args.theorem, cfg, args.trials, args.seed, args.oracle, args.cap)
    doc = report.to_json()
    if args.report:
        Path(args.report).write_text(json.dumps(doc, indent=2) + "\n")
    return (EXIT_OK if report.passed else EXIT_FAIL), doc


def cmd_fixtures(args) -> tuple[int, dict]:
    names = args.name or list(FIXTURES)
    reports = [run_fixture(n) for n in names]
    ok = all(r.passed for r in reports)
    return (EXIT_OK if ok else EXIT_FAIL), {"fixtures": [r.to_json() for r in reports]}


# -- text rendering -----------------------------------------------------------------------

def _text(doc, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for k, v in doc.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_text(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}:")
            for item in v:
                lines.append(_text(item, indent + 1))
                lines.append("")
        elif isinstance(v, list):
            lines.append(f"{pad}{k}: ({', '.join(map(str, v))})")
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(line for line in lines if line is not None)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS,
                        help="output format (default text)")
    ap = argparse.ArgumentParser(prog="ilp", parents=[common],
                                 description="Interval linear programs: ranges, transformations, checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="solve one scenario exactly")
    s.add_argument("file")
    s.add_argument("--scenario", help="JSON object mapping coefficient ids to values")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("range", parents=[common], help="optimal value range")
    s.add_argument("file")
    s.add_argument("--method", choices=("enumerate", "formula", "both"), default="enumerate")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.set_defaults(func=cmd_range)

    s = sub.add_parser("transform", parents=[common], help="apply a transformation")
    s.add_argument("file")
    s.add_argument("--op", choices=sorted(TRANSFORMS), required=True)
    s.add_argument("--vars", nargs="+", help="variables for nonneg (1-based index or name)")
    s.add_argument("--rows", nargs="+", help="equation rows for split (1-based)")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("check-feasible", parents=[common], help="weak feasibility of a point")
    s.add_argument("file")
    s.add_argument("--point", required=True)
    s.set_defaults(func=cmd_check_feasible)

    s = sub.add_parser("check-optimal", parents=[common], help="weak optimality of a point")
    s.add_argument("file")
    s.add_argument("--point", required=True)
    s.add_argument("--search-budget", type=int, default=DEFAULT_CAP)
    s.set_defaults(func=cmd_check_optimal)

    s = sub.add_parser("dualize", parents=[common], help="write the dual family")
    s.add_argument("file")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_dualize)

    s = sub.add_parser("verify", parents=[common], help="randomized property suite")
    s.add_argument("--theorem", choices=THEOREMS, required=True)
    s.add_argument("--trials", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--dims", help="VARSxROWS, e.g. 3x2")
    s.add_argument("--oracle", choices=ORACLES, default="enumerate")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.add_argument("--report", help="write the report with counterexamples to this file")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("fixtures", parents=[common], help="run the worked examples")
    s.add_argument("--name", nargs="+", choices=FIXTURES)
    s.set_defaults(func=cmd_fixtures)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    fmt = getattr(args, "format", "text")
    try:
        code, doc = args.func(args)
    except (InputError, ProgramFormatError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except EnumerationCapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNDECIDED
    if fmt == "json":
        print(json.dumps(doc, indent=2))
    else:
        print(_text(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
