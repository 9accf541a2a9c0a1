"""Command line front end.

Exit codes: 0 results produced, 1 no classical solution, 2 parse or usage
error, 3 structural rejection (shape or degree bounds), 4 solver incomplete or
budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import sys

import sympy as sp

from . import __version__
from .errors import (
    DegreeBoundExceeded,
    DegenerateEquation,
    DegenerateFamily,
    KernelNotFound,
    NotOrthogonalShape,
    ParseError,
    ResourceLimit,
    SolverIncomplete,
    UndefinedRatio,
)
from .expansion import expand, symmetric_square, verify_solution
from .exprio import (
    NO_SOLUTION_TEXT,
    EquationData,
    ParamDecl,
    format_expr,
    parse_coefficients,
    parse_ratio,
    parse_recurrence,
    print_report,
    report_to_dict,
)
from .inverse import compute_shift, run_algorithm
from .relations import relations
from .standard import PRESETS, Standardization, standardization

EXIT_OK, EXIT_NONE, EXIT_USAGE, EXIT_SHAPE, EXIT_INCOMPLETE = 0, 1, 2, 3, 4

_STR = {"type": "string"}
_STR_MAP = {"type": "object", "additionalProperties": _STR}

# JSON Schema (draft 2020-12) of `classify --json`
CLASSIFY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["input", "shift_N", "mode", "solutions"],
    "additionalProperties": False,
    "properties": {
        "input": _STR,
        "shift_N": {"type": "integer", "minimum": 0},
        "mode": {"enum": ["continuous", "discrete", "both"]},
        "solutions": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["branch", "equation", "transform", "family", "parameters", "density", "support",
                             "kratio", "admissible", "side_conditions", "unresolved"],
                "additionalProperties": False,
                "properties": {
                    "branch": _STR,
                    "equation": {"type": "object", "required": list("abcde"), "additionalProperties": False,
                                 "properties": {k: _STR for k in "abcde"}},
                    "transform": {"type": "object", "required": ["f", "g"], "additionalProperties": False,
                                  "properties": {"f": _STR, "g": _STR}},
                    "solved": _STR_MAP,
                    "family": _STR,
                    "parameters": _STR_MAP,
                    "density": _STR,
                    "support": _STR,
                    "kratio": {"type": ["string", "null"]},
                    "admissible": {
                        "type": "object",
                        "required": ["real_weight_exists", "lambda_n_nonzero", "parameter_conditions"],
                        "properties": {
                            "real_weight_exists": {"type": ["boolean", "null"]},
                            "lambda_n_nonzero": {"type": ["boolean", "null"]},
                            "parameter_conditions": {"type": "array", "items": _STR},
                        },
                    },
                    "side_conditions": {"type": "array", "items": _STR},
                    "unresolved": {"type": "array", "items": _STR},
                },
            },
        },
    },
}


def _param(text: str) -> ParamDecl:
    """NAME=fixed|unknown[:VALUE] or bare NAME (unknown)."""
    name, _, spec = text.partition("=")
    mode, _, value = (spec or "unknown").partition(":")
    if mode not in ("fixed", "unknown"):
        raise argparse.ArgumentTypeError(f"parameter mode must be fixed or unknown, got {mode!r}")
    try:
        return ParamDecl(name.strip(), mode, sp.Rational(value) if value else None)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--param", action="append", type=_param, default=[], metavar="NAME=fixed|unknown[:VALUE]")
    p.add_argument("--json", action="store_true", help="machine readable output")


def _equation_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--sigma", required=True, help='coefficients "a,b,c" of sigma = a x^2 + b x + c')
    p.add_argument("--tau", required=True, help='coefficients "d,e" of tau = d x + e')
    p.add_argument("--kind", choices=("continuous", "discrete"), default="continuous")
    p.add_argument("--std", default="monic", help=f"preset ({', '.join(PRESETS)}) or a ratio k_(n+1)/k_n in n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="classicalop", description="Classical orthogonal polynomials from recurrences and equations.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="find classical solutions of a three-term recurrence")
    p.add_argument("recurrence", help='e.g. "(n+3)*p[n+2] - x*(n+2)*p[n+1] + (n+1)*p[n] = 0", or - for stdin')
    p.add_argument("--mode", choices=("continuous", "discrete", "both"), default="both")
    p.add_argument("--budget", type=int, default=20000, help="cap on solver steps")
    _common(p)

    p = sub.add_parser("derive", help="structure relations of an equation")
    _equation_args(p)
    _common(p)

    for name, help_text in (("expand", "explicit polynomial solutions"), ("verify", "expand and substitute back")):
        p = sub.add_parser(name, help=help_text)
        _equation_args(p)
        p.add_argument("--nmax", type=int, default=6)
        _common(p)

    p = sub.add_parser("square", help="recurrence satisfied by the squares of the solutions")
    p.add_argument("recurrence")
    _common(p)
    return parser


def _read(text: str) -> str:
    return sys.stdin.read().strip() if text == "-" else text


def _equation(args) -> EquationData:
    a, b, c = parse_coefficients(args.sigma, 3, args.param)
    d, e = parse_coefficients(args.tau, 2, args.param)
    return EquationData(a, b, c, d, e, args.kind)


def _std(args) -> Standardization:
    if args.std.lower() in PRESETS:
        return standardization(args.std)
    return Standardization(parse_ratio(args.std, args.param), 1, "custom")


def _cmd_classify(args, out) -> int:
    rec = parse_recurrence(_read(args.recurrence), args.param)
    shift = compute_shift(rec.specialized())
    status = EXIT_OK
    try:
        reports = run_algorithm(rec, args.mode, budget=args.budget)
    except SolverIncomplete as exc:
        reports, _ = exc.partial if isinstance(exc.partial, tuple) else ([], None)
        print(f"warning: {exc}", file=sys.stderr)
        status = EXIT_INCOMPLETE
    if args.json:
        payload = {
            "input": rec.to_text(),
            "shift_N": shift.N,
            "mode": args.mode,
            "solutions": [report_to_dict(r) for r in reports],
        }
        out.write(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        out.write(f"input: {rec.to_text()}\nshift N = {shift.N}\n\n")
        out.write(print_report(reports) + "\n")
    if status == EXIT_OK and not reports:
        return EXIT_NONE
    return status


def _relations_dict(eq: EquationData, std: Standardization) -> dict:
    rec, rule, ratios = relations(eq, std)
    names = {
        "A": rec.A, "B": rec.B, "C": rec.C, "Btilde": rec.Btilde, "Ctilde": rec.Ctilde,
        "alpha": rule.alpha, "beta": rule.beta, "gamma": rule.gamma,
        "alphaT": rule.alphaT, "betaT": rule.betaT, "gammaT": rule.gammaT,
        "lambda_n": ratios.lambda_n, "kprime_over_k": ratios.kprime_over_k, "kpp_over_k": ratios.kpp_over_k,
        "kprime_ratio": ratios.kprime_ratio, "h_ratio": ratios.h_ratio, "E_ratio": ratios.E_ratio, "D_ratio": ratios.D_ratio,
    }
    return {k: (str(v) if v is not None else None) for k, v in names.items()}


def _cmd_derive(args, out) -> int:
    eq, std = _equation(args), _std(args)
    data = _relations_dict(eq, std)
    exceptional = list(relations(eq, std).exceptional)
    if args.json:
        payload = {"equation": str(eq), "kind": eq.kind, "standardization": std.name, "relations": data, "exceptional": exceptional}
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write(f"{eq} ({eq.kind}, {std.name})\n")
        rule = "sigma p_n'" if eq.kind == "continuous" else "sigma nabla p_n"
        out.write("p_{n+1} = (A x + B) p_n - C p_{n-1}\n")
        out.write(f"{rule} = alpha p_(n+1) + beta p_n + gamma p_(n-1)\n")
        width = max(len(k) for k in data)
        for k, v in data.items():
            out.write(f"  {k.ljust(width)} = {v if v is not None else 'undefined'}\n")
        if exceptional:
            out.write(f"note: at n = {', '.join(map(str, exceptional))} C and gamma are limits, not values (d = a)\n")
    return EXIT_OK


def _cmd_expand(args, out, check: bool) -> int:
    eq, std = _equation(args), _std(args)
    table = expand(eq, std, args.nmax)
    verdict = verify_solution(eq, table) if check else None
    if args.json:
        payload = {"equation": str(eq), "kind": eq.kind, "polynomials": [format_expr(table.poly(n)) for n in range(table.n_max + 1)]}
        if verdict is not None:
            payload["verified"] = verdict.ok
            payload["failures"] = [n for n, _ in verdict.failures]
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        for n in range(table.n_max + 1):
            out.write(f"p_{n}(x) = {format_expr(table.poly(n))}\n")
        if verdict is not None:
            out.write("verified: all rows satisfy the equation\n" if verdict.ok else f"FAILED rows: {[n for n, _ in verdict.failures]}\n")
    return EXIT_OK if verdict is None or verdict.ok else EXIT_NONE


def _cmd_square(args, out) -> int:
    rec = parse_recurrence(_read(args.recurrence), args.param)
    sq = symmetric_square(rec)
    if args.json:
        out.write(json.dumps({"order": sq.order, "coefficients": [format_expr(sp.factor(c)) for c in sq.coeffs]}, indent=2) + "\n")
    else:
        out.write(" + ".join(f"({format_expr(sp.factor(c))})*S[n+{i}]" for i, c in enumerate(sq.coeffs)) + " = 0\n")
    return EXIT_OK


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        if args.command == "classify":
            return _cmd_classify(args, out)
        if args.command == "derive":
            return _cmd_derive(args, out)
        if args.command in ("expand", "verify"):
            return _cmd_expand(args, out, args.command == "verify")
        return _cmd_square(args, out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotOrthogonalShape, DegreeBoundExceeded) as exc:
        out.write(NO_SOLUTION_TEXT + "\n")
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    except ResourceLimit as exc:
        print(f"incomplete: {exc}", file=sys.stderr)
        return EXIT_INCOMPLETE
    except (DegenerateEquation, DegenerateFamily, UndefinedRatio, KernelNotFound, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
