"""Core data carriers, the recurrence parser and report printers.

Grammar accepted by :func:`parse_recurrence`::

    eq     := sum "=" "0"
    sum    := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := atom ("^" uint)?
    atom   := uint | uint "/" uint | ident | "n" | "x" | "p" "[" shift "]" | "(" sum ")"
    shift  := "n" (("+" | "-") uint)?

Identifiers must be declared as parameters; ``n``, ``x`` and ``p`` are reserved.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import sympy as sp

from .algebra import N, X, RatFuncN, canonical, sym
from .errors import DegenerateEquation, ParseError, UnknownSymbol

RESERVED = ("n", "x", "p")
MODES = ("fixed", "unknown")


# -- equation data ---------------------------------------------------------------


@dataclass(frozen=True)
class EquationData:
    """sigma(x) = a x^2 + b x + c and tau(x) = d x + e of the second-order equation."""

    a: sp.Expr
    b: sp.Expr
    c: sp.Expr
    d: sp.Expr
    e: sp.Expr
    kind: str = "continuous"

    def __post_init__(self):
        if self.kind not in ("continuous", "discrete"):
            raise ValueError(f"kind must be continuous or discrete, got {self.kind!r}")
        for name in "abcde":
            object.__setattr__(self, name, canonical(getattr(self, name)))
        if all(v == 0 for v in self.coefficients):
            raise DegenerateEquation("all of a, b, c, d, e vanish")

    @classmethod
    def of(cls, coeffs: Iterable, kind: str = "continuous") -> "EquationData":
        a, b, c, d, e = (sp.sympify(v) if not isinstance(v, Fraction) else sp.Rational(v.numerator, v.denominator) for v in coeffs)
        return cls(a, b, c, d, e, kind)

    @property
    def coefficients(self) -> tuple[sp.Expr, ...]:
        return (self.a, self.b, self.c, self.d, self.e)

    def sigma(self, x=X) -> sp.Expr:
        return self.a * x**2 + self.b * x + self.c

    def tau(self, x=X) -> sp.Expr:
        return self.d * x + self.e

    @property
    def lambda_n(self) -> RatFuncN:
        return RatFuncN(-(self.a * N * (N - 1) + self.d * N))

    @property
    def parameters(self) -> tuple[str, ...]:
        syms = set().union(*(v.free_symbols for v in self.coefficients))
        return tuple(sorted(s.name for s in syms))

    @property
    def admissible(self) -> bool:
        """a(n-1) + d != 0 for every n >= 1 (generic parameters count as admissible)."""
        expr = sp.expand(self.a * (N - 1) + self.d)
        if expr == 0:
            return False
        if self.a == 0:
            return True
        root = canonical(1 - self.d / self.a)
        if root.free_symbols:
            return True
        return not (root.is_integer and root >= 1)

    def scaled(self, factor) -> "EquationData":
        return EquationData(*(factor * v for v in self.coefficients), kind=self.kind)

    def subs(self, mapping: dict) -> "EquationData":
        return EquationData(*(sp.sympify(v).subs(mapping) for v in self.coefficients), kind=self.kind)

    def projectively_equal(self, other: "EquationData") -> bool:
        """Equal up to a common nonzero factor."""
        mine, theirs = self.coefficients, other.coefficients
        pivot = next((i for i, v in enumerate(theirs) if v != 0), None)
        if pivot is None or mine[pivot] == 0:
            return False
        ratio = canonical(mine[pivot] / theirs[pivot])
        return all(canonical(m - ratio * t) == 0 for m, t in zip(mine, theirs))

    def __str__(self):
        return f"sigma(x) = {format_expr(self.sigma())}, tau(x) = {format_expr(self.tau())}"


# -- recurrences -----------------------------------------------------------------


@dataclass(frozen=True)
class ParamDecl:
    name: str
    mode: str = "unknown"
    value: sp.Expr | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"parameter mode must be fixed or unknown, got {self.mode!r}")
        if self.name in RESERVED or not re.fullmatch(r"[^\W\d]\w*", self.name):
            raise ValueError(f"invalid parameter name {self.name!r}")


def declare(*specs) -> tuple[ParamDecl, ...]:
    """Build parameter declarations from names, ``(name, mode)`` pairs or ParamDecl."""
    out = []
    for s in specs:
        if isinstance(s, ParamDecl):
            out.append(s)
        elif isinstance(s, str):
            out.append(ParamDecl(s))
        else:
            out.append(ParamDecl(*s))
    return tuple(out)


def _normalize_triple(q, r, s) -> tuple[sp.Expr, sp.Expr, sp.Expr]:
    """Clear rational denominators, strip integer content, make q's leading coefficient positive."""
    exprs = [sp.together(sp.sympify(v)) for v in (q, r, s)]
    den = sp.Integer(1)
    for v in exprs:
        den = sp.lcm(den, sp.denom(v))
    exprs = [sp.expand(sp.cancel(v * den)) for v in exprs]
    syms = sorted(set().union(*(e.free_symbols for e in exprs)), key=lambda t: (t.name not in ("n", "x"), t.name))
    coeffs = []
    for e in exprs:
        if e != 0:
            coeffs.extend(sp.Poly(e, *syms).coeffs() if syms else [e])
    dens = [sp.Rational(c).q for c in coeffs]
    nums = [sp.Rational(c).p for c in coeffs]
    lcm = math.lcm(*dens) if dens else 1
    g = math.gcd(*[n * (lcm // d) for n, d in zip(nums, dens)]) if nums else 1
    scale = sp.Rational(lcm, g)
    lead = sp.Poly(exprs[0], *syms).LC() if syms else exprs[0]
    if lead < 0:
        scale = -scale
    return tuple(sp.expand(scale * e) for e in exprs)


@dataclass(frozen=True)
class RecurrenceEq:
    """q(n,x) p[n+2] + r(n,x) p[n+1] + s(n,x) p[n] = 0."""

    q: sp.Expr
    r: sp.Expr
    s: sp.Expr
    params: tuple[ParamDecl, ...] = ()
    normalize: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        q, r, s = (sp.expand(sp.sympify(v)) for v in (self.q, self.r, self.s))
        if q == 0:
            raise ValueError("q must not vanish identically")
        if self.normalize:
            q, r, s = _normalize_triple(q, r, s)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "params", declare(*self.params))

    @property
    def coefficients(self) -> tuple[sp.Expr, sp.Expr, sp.Expr]:
        return (self.q, self.r, self.s)

    def mode_of(self, name: str) -> str:
        for p in self.params:
            if p.name == name:
                return p.mode
        raise KeyError(name)

    @property
    def fixed_params(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params if p.mode == "fixed")

    @property
    def unknown_params(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params if p.mode == "unknown")

    def shifted(self, k: int) -> "RecurrenceEq":
        """The recurrence satisfied by n -> P_{n+k}."""
        return RecurrenceEq(*(v.subs(N, N + k) for v in self.coefficients), params=self.params)

    def specialized(self) -> "RecurrenceEq":
        """Substitute parameters that carry a fixed value."""
        values = {sym(p.name): p.value for p in self.params if p.value is not None}
        if not values:
            return self
        rest = tuple(p for p in self.params if p.value is None)
        return RecurrenceEq(*(v.subs(values) for v in self.coefficients), params=rest)

    def to_text(self) -> str:
        parts = []
        for coeff, k in zip(self.coefficients, (2, 1, 0)):
            if coeff == 0:
                continue
            target = f"p[n+{k}]" if k else "p[n]"
            parts.append(f"({format_poly(coeff)})*{target}")
        return " + ".join(parts) + " = 0"

    def __str__(self):
        return self.to_text()


# -- grammar printer ---------------------------------------------------------------


def format_poly(expr) -> str:
    """Print a polynomial in the parser's grammar (explicit *, ^ powers, a/b literals)."""
    expr = sp.expand(sp.sympify(expr))
    if expr == 0:
        return "0"
    syms = sorted(expr.free_symbols, key=lambda t: (t.name not in ("n", "x"), t.name))
    if not syms:
        return _format_rat(sp.Rational(expr))
    poly = sp.Poly(expr, *syms)
    out = []
    for monom, coeff in poly.terms():
        coeff = sp.Rational(coeff)
        factors = []
        for s, e in zip(syms, monom):
            if e == 1:
                factors.append(s.name)
            elif e > 1:
                factors.append(f"{s.name}^{e}")
        mag = abs(coeff)
        body = "*".join(([_format_rat(mag)] if mag != 1 or not factors else []) + factors)
        sign = "-" if coeff < 0 else "+"
        out.append((sign, body))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def _format_rat(r: sp.Rational) -> str:
    return str(r.p) if r.q == 1 else f"{r.p}/{r.q}"


def format_expr(expr) -> str:
    """Human-readable form with ^ for powers."""
    return sp.sstr(expr).replace("**", "^")


# -- tokenizer and parser ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<uint>\d+)|(?P<ident>[^\W\d]\w*)|(?P<op>[-+*^/()\[\]=]))", re.UNICODE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    text = text.replace("−", "-").replace("·", "*")
    toks: list[_Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        ch = text[pos]
        if ch == "\n":
            line += 1
            pos += 1
            line_start = pos
            continue
        if ch.isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {ch!r}", line, pos - line_start + 1)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), line, start - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Linear:
    """A value linear in p[n+k]: {k: coefficient} plus the p-free part under key None."""

    __slots__ = ("parts",)

    def __init__(self, parts: dict):
        self.parts = {k: v for k, v in parts.items() if v != 0}

    @classmethod
    def const(cls, v):
        return cls({None: v})

    @property
    def has_p(self) -> bool:
        return any(k is not None for k in self.parts)

    def scalar(self):
        return self.parts.get(None, sp.Integer(0))

    def __add__(self, other):
        out = dict(self.parts)
        for k, v in other.parts.items():
            out[k] = sp.expand(out.get(k, 0) + v)
        return _Linear(out)

    def __neg__(self):
        return _Linear({k: -v for k, v in self.parts.items()})

    def scale(self, c):
        return _Linear({k: sp.expand(c * v) for k, v in self.parts.items()})


class _Parser:
    def __init__(self, text: str, params: Iterable[str], allow_p: bool = True, allow_nx: bool = True):
        self.toks = _tokenize(text)
        self.i = 0
        self.params = set(params)
        self.allow_p = allow_p
        self.allow_nx = allow_nx
        self.seq_name: str | None = None

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, expected: Iterable[str] = (), tok: _Tok | None = None, cls=ParseError):
        tok = tok or self.tok
        raise cls(message, tok.line, tok.col, tuple(expected))

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str, expected: Iterable[str] | None = None) -> None:
        if not self.accept(text):
            found = self.tok.text or "end of input"
            self.error(f"found {found!r}", expected or (repr(text),))

    def expect_uint(self) -> int:
        if self.tok.kind != "uint":
            found = self.tok.text or "end of input"
            self.error(f"found {found!r}", ("unsigned integer",))
        v = int(self.tok.text)
        self.i += 1
        return v

    def parse_equation(self) -> _Linear:
        lhs = self.parse_sum()
        self.expect("=", ("'='", "'+'", "'-'", "'*'"))
        if not (self.tok.kind == "uint" and int(self.tok.text) == 0):
            self.error("right-hand side must be 0", ("'0'",))
        self.i += 1
        self.expect_eof()
        return lhs

    def expect_eof(self) -> None:
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}", ("end of input", "'+'", "'-'", "'*'"))

    def parse_sum(self) -> _Linear:
        value = self.parse_term()
        while True:
            if self.accept("+"):
                value = value + self.parse_term()
            elif self.accept("-"):
                value = value + (-self.parse_term())
            else:
                return value

    def parse_term(self) -> _Linear:
        start = self.tok
        # a leading sign is allowed on the first term of a sum
        if self.accept("-"):
            return -self.parse_term()
        if self.accept("+"):
            return self.parse_term()
        value = self.parse_factor()
        while self.accept("*"):
            rhs = self.parse_factor()
            if value.has_p and rhs.has_p:
                self.error("product of two sequence terms is not linear", tok=start)
            if rhs.has_p:
                value, rhs = rhs, value
            value = value.scale(rhs.scalar())
        return value

    def parse_factor(self) -> _Linear:
        base_tok = self.tok
        base = self.parse_atom()
        if self.accept("^"):
            if self.tok.kind == "op" and self.tok.text == "-":
                self.error("exponents must be nonnegative integers", ("unsigned integer",))
            k = self.expect_uint()
            if base.has_p:
                if k != 1:
                    self.error("powers of sequence terms are not linear", tok=base_tok)
                return base
            return _Linear.const(sp.expand(base.scalar() ** k))
        return base

    def parse_atom(self) -> _Linear:
        tok = self.tok
        if tok.kind == "uint":
            self.i += 1
            num = int(tok.text)
            if self.accept("/"):
                if self.tok.kind != "uint":
                    self.error("only integer/integer division is allowed", ("unsigned integer",))
                den = self.expect_uint()
                if den == 0:
                    self.error("division by zero", tok=tok)
                return _Linear.const(sp.Rational(num, den))
            return _Linear.const(sp.Integer(num))
        if tok.kind == "ident":
            self.i += 1
            name = tok.text
            # any identifier directly followed by "[" names the sequence (p[n], P[n], T[n], ...)
            if self.tok.kind == "op" and self.tok.text == "[" and name not in self.params and name not in ("n", "x"):
                if not self.allow_p:
                    self.error("sequence terms are not allowed here", tok=tok)
                if self.seq_name is None:
                    self.seq_name = name
                elif name != self.seq_name:
                    self.error(f"sequence {name!r} differs from {self.seq_name!r}", (f"'{self.seq_name}['",), tok=tok)
                return self.parse_shift()
            if name in ("n", "x"):
                if not self.allow_nx:
                    self.error(f"{name!r} is not allowed here", tok=tok)
                return _Linear.const(sym(name))
            if name not in self.params:
                raise UnknownSymbol(f"undeclared identifier {name!r}", tok.line, tok.col, ("declared parameter", "'n'", "'x'", "'p'"))
            return _Linear.const(sym(name))
        if self.accept("("):
            value = self.parse_sum()
            self.expect(")", ("')'", "'+'", "'-'", "'*'"))
            return value
        found = tok.text or "end of input"
        self.error(f"found {found!r}", ("unsigned integer", "identifier", "'('", "'p['"))

    def parse_shift(self) -> _Linear:
        self.expect("[", ("'['",))
        tok = self.tok
        if not (tok.kind == "ident" and tok.text == "n"):
            self.error(f"found {tok.text or 'end of input'!r}", ("'n'",))
        self.i += 1
        k = 0
        if self.accept("+"):
            k = self.expect_uint()
        elif self.accept("-"):
            k = -self.expect_uint()
        self.expect("]", ("']'", "'+'", "'-'"))
        if k not in (0, 1, 2):
            self.error(f"shift n{k:+d} outside p[n], p[n+1], p[n+2]", ("p[n]", "p[n+1]", "p[n+2]"), tok=tok)
        return _Linear({k: sp.Integer(1)})


def _decls(params) -> tuple[ParamDecl, ...]:
    if params is None:
        return ()
    if isinstance(params, dict):
        return tuple(ParamDecl(k, v) if isinstance(v, str) else ParamDecl(k, *v) for k, v in params.items())
    return declare(*params)


def parse_recurrence(text: str, params=None) -> RecurrenceEq:
    """Parse ``text`` into a RecurrenceEq; ``params`` declares the allowed identifiers."""
    decls = _decls(params)
    parser = _Parser(text, [d.name for d in decls])
    lin = parser.parse_equation()
    if sp.expand(lin.scalar()) != 0:
        raise ParseError("term without a sequence factor (inhomogeneous equation)", 1, 1)
    q = lin.parts.get(2, sp.Integer(0))
    r = lin.parts.get(1, sp.Integer(0))
    s = lin.parts.get(0, sp.Integer(0))
    if sp.expand(q) == 0:
        raise ParseError("coefficient of p[n+2] vanishes; a second-order recurrence is required", 1, 1, ("p[n+2]",))
    return RecurrenceEq(q, r, s, params=decls)


def parse_polynomial(text: str, params=None, allow_nx: bool = True) -> sp.Expr:
    """Parse a p-free polynomial (sum) in n, x and declared parameters."""
    decls = _decls(params)
    parser = _Parser(text, [d.name for d in decls], allow_p=False, allow_nx=allow_nx)
    value = parser.parse_sum()
    parser.expect_eof()
    return value.scalar()


def parse_ratio(text: str, params=None) -> sp.Expr:
    """Parse ``sum`` or ``sum / sum`` (used for standardization ratios in n)."""
    decls = _decls(params)
    parser = _Parser(text, [d.name for d in decls], allow_p=False)
    num = parser.parse_sum().scalar()
    if parser.accept("/"):
        den = parser.parse_sum().scalar()
        if sp.expand(den) == 0:
            parser.error("division by zero")
        parser.expect_eof()
        return canonical(num / den)
    parser.expect_eof()
    return num


def parse_coefficients(text: str, count: int, params=None) -> tuple[sp.Expr, ...]:
    """Parse a comma separated list of ``count`` parameter-only constants (e.g. "1,0,-4")."""
    pieces = text.split(",")
    if len(pieces) != count:
        raise ParseError(f"expected {count} comma separated coefficients, got {len(pieces)}", 1, 1, ("','",))
    return tuple(parse_polynomial(p, params, allow_nx=False) for p in pieces)


# -- report printing ------------------------------------------------------------------

NO_SOLUTION_TEXT = "no classical orthogonal polynomial solution exists"


def _json_value(v):
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, dict):
        return {str(k): _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    if hasattr(v, "as_expr") and not isinstance(v, sp.Basic):
        v = v.as_expr()
    return format_expr(v)


def report_to_dict(report) -> dict:
    eq = report.eq
    return {
        "branch": report.branch,
        "equation": {k: format_expr(getattr(eq, k)) for k in "abcde"},
        "transform": {"f": format_expr(report.transform.f), "g": format_expr(report.transform.g)},
        "solved": {k: format_expr(v) for k, v in report.solved},
        "family": report.family,
        "parameters": {k: format_expr(v) for k, v in report.parameters},
        "density": str(report.density),
        "support": str(report.support),
        "kratio": str(report.kratio) if report.kratio is not None else None,
        "admissible": {
            "real_weight_exists": report.admissible.real_weight_exists,
            "lambda_n_nonzero": report.admissible.lambda_nonzero,
            "parameter_conditions": list(report.admissible.parameter_conditions),
        },
        "side_conditions": [format_expr(c) + " != 0" for c in report.side_conditions],
        "unresolved": [format_expr(u) for u in report.unresolved],
    }


def report_to_text(report) -> str:
    lines = [f"branch: {report.branch}", f"equation: {report.eq}"]
    if report.eq.kind == "discrete":
        lines.append(f"transform: x -> (x - ({format_expr(report.transform.g)}))/({format_expr(report.transform.f)})")
    if report.solved:
        lines.append("recurrence parameters: " + ", ".join(f"{k} = {format_expr(v)}" for k, v in report.solved))
    if report.free:
        lines.append("free: " + ", ".join(report.free))
    lines.append(f"family: {report.family}")
    if report.parameters:
        lines.append("parameters: " + ", ".join(f"{k} = {format_expr(v)}" for k, v in report.parameters))
    lines.append(f"weight ∝ {report.density}")
    lines.append(f"support: {report.support}")
    if report.kratio is not None:
        lines.append(f"kratio: {report.kratio}")
    adm = report.admissible
    lines.append(
        "admissible: real weight "
        + {True: "yes", False: "no", None: "unknown"}[adm.real_weight_exists]
        + ", lambda_n nonzero "
        + {True: "yes", False: "no", None: "unknown"}[adm.lambda_nonzero]
    )
    for cond in adm.parameter_conditions:
        lines.append(f"  condition: {cond}")
    if report.side_conditions:
        lines.append("side conditions: " + ", ".join(format_expr(c) + " != 0" for c in report.side_conditions))
    for u in report.unresolved:
        lines.append(f"unresolved: {format_expr(u)} = 0")
    return "\n".join(lines)


def print_report(report, format: str = "text") -> str:
    """Render one report (or a list of reports) deterministically as text or JSON."""
    reports = list(report) if isinstance(report, (list, tuple)) else [report]
    if format == "json":
        payload = [report_to_dict(r) for r in reports]
        return json.dumps(payload if isinstance(report, (list, tuple)) else payload[0], indent=2, sort_keys=True, ensure_ascii=False)
    if format != "text":
        raise ValueError(f"unknown format {format!r}")
    if not reports:
        return NO_SOLUTION_TEXT
    return "\n\n".join(report_to_text(r) for r in reports)
