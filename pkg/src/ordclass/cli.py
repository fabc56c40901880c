"""Command-line front end: ``ordclass SUBCOMMAND ...``.

Exit status: 0 success, 1 parse error, 2 domain error (or bad usage),
3 OutOfScope verdict, 4 selftest mismatch.  Results go to stdout and
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from dataclasses import dataclass, field
from typing import List, Optional

from . import oracle
from .classifier import (
    AxiomContext,
    ClassifierDomainError,
    KSpace,
    Outcome,
    PSI_MODES,
    classify,
    iso_K_abstract,
    psi_case,
)
from .ordinals import (
    OMEGA,
    OrdinalDomainError,
    cardinality,
    cofinality,
    compare,
    gamma_min,
    initial_ordinal,
    is_finite,
    is_regular,
    is_successor,
    is_zero,
    normalize,
)
from .textio import (
    VERDICT_SCHEMA,
    ParseError,
    SpaceDomainError,
    parse_ordinal,
    parse_space,
    print_normal,
    verdict_to_json,
)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_DOMAIN = 2
EXIT_OUT_OF_SCOPE = 3
EXIT_SELFTEST = 4

DOMAIN_ERRORS = (OrdinalDomainError, ClassifierDomainError, SpaceDomainError)


class UsageError(Exception):
    """Wrong number of arguments on a batch line, unreadable batch file, ..."""


@dataclass
class Result:
    """Outcome of one query: stdout lines, a JSON document and an exit status."""

    lines: List[str]
    doc: dict
    status: int = EXIT_OK
    explain: List[str] = field(default_factory=list)


# -- JSON schemas ----------------------------------------------------------------

_STR = {"type": "string"}


def _obj(**props):
    return {
        "type": "object",
        "required": sorted(props),
        "additionalProperties": False,
        "properties": props,
    }


_CARD = {"type": "string"}

SCHEMAS = {
    "norm": _obj(input=_STR, value=_STR),
    "cmp": _obj(left=_STR, right=_STR, relation={"enum": ["less", "equal", "greater"]}),
    "calc": _obj(
        input=_STR,
        value=_STR,
        cardinality=_CARD,
        cofinality=_STR,
        kind={"enum": ["zero", "successor", "limit"]},
        initial_ordinal={"type": ["string", "null"]},
        regular={"type": ["boolean", "null"]},
        gamma_min={"type": ["string", "null"]},
    ),
    "card": _obj(value=_STR, cardinality=_CARD),
    "cof": _obj(value=_STR, cofinality=_STR),
    "psi": _obj(
        **{
            "lambda": _STR,
            "xi": _STR,
            "lambda0": _STR,
            "psi": _STR,
            "case": _STR,
            "citation": _STR,
            "psi_mode": {"enum": list(PSI_MODES)},
        }
    ),
    "classify": VERDICT_SCHEMA,
    "selftest": _obj(
        grid=_STR,
        size={"type": "integer", "minimum": 0},
        ok={"type": "boolean"},
        reports={
            "type": "array",
            "items": _obj(
                suite=_STR,
                grid=_STR,
                checked={"type": "integer", "minimum": 0},
                mismatches={"type": "array", "items": {"type": "object"}},
                ok={"type": "boolean"},
            ),
        },
    ),
    "error": _obj(
        error={"enum": ["parse", "domain", "usage"]},
        message=_STR,
        span={"type": ["array", "null"], "items": {"type": "integer"}},
    ),
}


# -- subcommands ----------------------------------------------------------------


def _ord(text: str):
    return normalize(parse_ordinal(text))


def _context(args) -> AxiomContext:
    return AxiomContext(assume_no_rvm=args.assume_no_rvm == "true", psi_mode=args.psi_mode)


def cmd_norm(args, expr):
    x = _ord(expr)
    return Result([print_normal(x, args.unicode)], {"input": expr, "value": print_normal(x)})


def cmd_cmp(args, a, b):
    x, y = _ord(a), _ord(b)
    relation = ("less", "equal", "greater")[compare(x, y) + 1]
    return Result([relation], {"left": print_normal(x), "right": print_normal(y), "relation": relation})


def cmd_calc(args, expr):
    x = _ord(expr)
    infinite = not is_finite(x)
    kind = "zero" if is_zero(x) else "successor" if is_successor(x) else "limit"
    doc = {
        "input": expr,
        "value": print_normal(x),
        "cardinality": str(cardinality(x)),
        "cofinality": print_normal(cofinality(x)),
        "kind": kind,
        "initial_ordinal": print_normal(initial_ordinal(x)) if infinite else None,
        "regular": is_regular(x) if infinite else None,
        "gamma_min": print_normal(gamma_min(x)) if compare(x, OMEGA) >= 0 else None,
    }
    u = args.unicode
    lines = [
        f"value: {print_normal(x, u)}",
        f"cardinality: {doc['cardinality']}",
        f"cofinality: {print_normal(cofinality(x), u)}",
        f"kind: {kind}",
    ]
    if infinite:
        lines.append(f"initial ordinal: {print_normal(initial_ordinal(x), u)}")
        lines.append(f"regular: {'yes' if doc['regular'] else 'no'}")
        lines.append(f"gamma_min: {print_normal(gamma_min(x), u)}")
    return Result(lines, doc)


def cmd_card(args, expr):
    x = _ord(expr)
    card = str(cardinality(x))
    return Result([card], {"value": print_normal(x), "cardinality": card})


def cmd_cof(args, expr):
    x = _ord(expr)
    cf = cofinality(x)
    return Result([print_normal(cf, args.unicode)], {"value": print_normal(x), "cofinality": print_normal(cf)})


def cmd_psi(args, lam_text, xi_text):
    ctx = _context(args)
    lam, xi = _ord(lam_text), _ord(xi_text)
    value, step = psi_case(lam, xi, ctx)
    doc = {
        "lambda": print_normal(lam),
        "xi": print_normal(xi),
        "lambda0": print_normal(initial_ordinal(lam)),
        "psi": print_normal(value),
        "case": step.case,
        "citation": step.citation,
        "psi_mode": ctx.psi_mode,
    }
    explain = [
        f"lambda0 = {print_normal(initial_ordinal(lam), args.unicode)}",
        f"[{step.case}] {step.citation}",
    ]
    return Result([print_normal(value, args.unicode)], doc, explain=explain)


def cmd_classify(args, a_text, b_text):
    ctx = _context(args)
    a, b = parse_space(a_text), parse_space(b_text)
    if args.method == "abstract" and isinstance(a, KSpace) and isinstance(b, KSpace):
        if (a.p, a.q) != (b.p, b.q):
            verdict = classify(a, b, ctx)  # reports OutOfScope for mismatched exponents
        else:
            verdict = iso_K_abstract(a.lam, a.xi, b.lam, b.xi, a.p, a.q, ctx)
    else:
        verdict = classify(a, b, ctx)
    explain = []
    if verdict.canonical:
        left, right = verdict.canonical
        u = args.unicode
        explain.append(
            f"canonical: ({print_normal(left.lambda0, u)}, {print_normal(left.psi, u)})"
            f" vs ({print_normal(right.lambda0, u)}, {print_normal(right.psi, u)})"
        )
    explain += [f"[{s.case}] {s.citation}" for s in verdict.trace]
    assumptions = sorted(str(t) for t in verdict.assumptions)
    explain.append("assumptions: " + (", ".join(assumptions) if assumptions else "none"))
    status = EXIT_OUT_OF_SCOPE if verdict.outcome is Outcome.OUT_OF_SCOPE else EXIT_OK
    return Result([verdict.outcome.value], verdict_to_json(verdict, ctx), status, explain)


def cmd_selftest(args):
    grid_name = args.grid
    spec = oracle.GRIDS[grid_name]
    values = oracle.enumerate_grid(spec)
    suites = args.suite or [s for s in oracle.SUITES if s != "arith" or not spec.atoms]
    reports = []
    for suite in suites:
        report = oracle.differential_check(suite, values)
        report.grid = grid_name
        reports.append(report)
    ok = all(r.ok for r in reports)
    lines = [f"grid {grid_name}: {len(values)} ordinals"]
    lines += [r.to_text() for r in reports]
    lines.append("selftest: " + ("ok" if ok else "FAILED"))
    doc = {"grid": grid_name, "size": len(values), "ok": ok, "reports": [r.to_json() for r in reports]}
    return Result(lines, doc, EXIT_OK if ok else EXIT_SELFTEST)


# name -> (handler, positional names, help)
COMMANDS = {
    "norm": (cmd_norm, ["EXPR"], "print the Cantor normal form of an ordinal expression"),
    "cmp": (cmd_cmp, ["A", "B"], "compare two ordinals (less, equal or greater)"),
    "calc": (cmd_calc, ["EXPR"], "evaluate an expression and report its basic invariants"),
    "card": (cmd_card, ["EXPR"], "cardinality of an ordinal"),
    "cof": (cmd_cof, ["EXPR"], "cofinality of an ordinal"),
    "psi": (cmd_psi, ["LAMBDA", "XI"], "canonical target index psi(LAMBDA, XI)"),
    "classify": (cmd_classify, ["A", "B"], "decide whether two space expressions are isomorphic"),
    "selftest": (cmd_selftest, [], "run the differential self-checks on a named grid"),
}


# -- argument handling ----------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, suppress: bool):
    # Subparsers use SUPPRESS defaults so flags given before the subcommand survive.
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--json", action="store_true", default=d(False), help="emit one JSON document per query")
    p.add_argument("--psi-mode", choices=PSI_MODES, default=d("repaired"), help="psi variant (default: repaired)")
    p.add_argument(
        "--assume-no-rvm",
        choices=["true", "false"],
        default=d("true"),
        help="assume no real-valued measurable cardinal at or below |lambda| (default: true)",
    )
    p.add_argument("--explain", action="store_true", default=d(False), help="print the decision trace")
    p.add_argument("--unicode", action="store_true", default=d(False), help="print w as the Greek letter")
    p.add_argument("--batch", metavar="FILE", default=d(None), help="read one query per line ('#' starts a comment)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ordclass",
        description="Ordinal arithmetic and isomorphic classification of C(K)-type spaces.",
    )
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND", required=True)
    for name, (_, positionals, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        _add_common(p, suppress=True)
        for pos in positionals:
            p.add_argument(pos.lower(), metavar=pos, nargs="?")
        if name == "classify":
            p.add_argument(
                "--method",
                choices=["canonical", "abstract"],
                default="canonical",
                help="decide K-spaces through canonical pairs or through the scalar criterion",
            )
        if name == "selftest":
            p.add_argument("--grid", default="small-v1", choices=sorted(oracle.GRIDS), help="named grid")
            p.add_argument("--suite", action="append", choices=list(oracle.SUITES), help="suite (repeatable)")
    return parser


def _error(kind: str, exc: Exception, span=None) -> Result:
    status = {"parse": EXIT_PARSE, "domain": EXIT_DOMAIN, "usage": EXIT_DOMAIN}[kind]
    message = str(exc)
    doc = {"error": kind, "message": message, "span": [span.start, span.end] if span else None}
    return Result([f"error: {kind}"], doc, status, explain=[message])


def run_query(args, operands: List[str]) -> Result:
    handler, positionals, _ = COMMANDS[args.command]
    try:
        if len(operands) != len(positionals):
            raise UsageError(
                f"{args.command} takes {len(positionals)} argument(s), got {len(operands)}"
            )
        return handler(args, *operands)
    except ParseError as exc:
        return _error("parse", exc, exc.span)
    except SpaceDomainError as exc:
        return _error("domain", exc, exc.span)
    except UsageError as exc:
        return _error("usage", exc)
    except DOMAIN_ERRORS as exc:
        return _error("domain", exc)


def _emit(args, result: Result, out, err, batch: bool):
    failed = "error" in result.doc
    if failed:
        print(result.explain[0], file=err)
        if not batch:
            return
    if args.json:
        print(json.dumps(result.doc, sort_keys=True, ensure_ascii=False), file=out)
        return
    for line in result.lines:
        print(line, file=out)
    if args.explain and not failed:
        for line in result.explain:
            print("  " + line, file=out)


def _explain_header(args, out):
    default = {"psi_mode": "repaired", "assume_no_rvm": "true"}
    for key, value in (("psi_mode", args.psi_mode), ("assume_no_rvm", args.assume_no_rvm)):
        note = " (default)" if value == default[key] else ""
        print(f"# {key}: {value}{note}", file=out)


def _batch_lines(path: str):
    with open(path, encoding="utf-8") as fh:
        for number, raw in enumerate(fh, 1):
            line = raw.strip()
            if line and not line.startswith("#"):
                yield number, line


def main(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    operands = [getattr(args, p.lower()) for p in COMMANDS[args.command][1]]
    operands = [o for o in operands if o is not None]
    if args.explain and not args.json:
        _explain_header(args, out)
    if args.batch is None:
        result = run_query(args, operands)
        _emit(args, result, out, err, batch=False)
        return result.status
    if operands:
        print("error: positional arguments are not allowed with --batch", file=err)
        return EXIT_DOMAIN
    try:
        lines = list(_batch_lines(args.batch))
    except OSError as exc:
        print(f"error: cannot read batch file: {exc}", file=err)
        return EXIT_DOMAIN
    status = EXIT_OK
    for number, line in lines:
        try:
            words = shlex.split(line, comments=True)
            if len(COMMANDS[args.command][1]) == 1 and len(words) > 1:
                words = [" ".join(words)]  # one-operand queries: the whole line is the expression
            result = run_query(args, words)
        except ValueError as exc:  # unbalanced quotes
            result = _error("parse", exc)
        if "error" in result.doc:
            result.explain[0] = f"line {number}: {result.explain[0]}"
        _emit(args, result, out, err, batch=True)
        status = max(status, result.status)
    return status


if __name__ == "__main__":
    sys.exit(main())
