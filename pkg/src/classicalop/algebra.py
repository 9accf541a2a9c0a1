"""Exact arithmetic layer.

Rationals are ``fractions.Fraction``.  Multivariate polynomials and rational
functions are sympy's sparse ``PolyElement`` / ``FracElement`` (cancelled on
construction).  On top of those this module adds the parameter-field context,
rational functions in the index ``n``, quadratic extension numbers and a few
univariate helpers.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import sympy as sp
from sympy import QQ
from sympy.polys.fields import FracElement, FracField
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, PolyRing

from .errors import ZeroPolynomial

Rat = Fraction

N = sp.Symbol("n")
X = sp.Symbol("x")


def to_rat(value) -> Fraction:
    """Convert int / Fraction / sympy Rational / gmpy mpq to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, sp.Basic):
        value = sp.nsimplify(value) if not isinstance(value, sp.Rational) else value
        if not isinstance(value, sp.Rational):
            raise TypeError(f"not a rational number: {value}")
        return Fraction(int(value.p), int(value.q))
    num = getattr(value, "numerator", None)
    den = getattr(value, "denominator", None)
    if num is None or den is None:
        raise TypeError(f"not a rational number: {value!r}")
    return Fraction(int(num), int(den))


def sym(name: str) -> sp.Symbol:
    return sp.Symbol(name)


@functools.lru_cache(maxsize=None)
def poly_ring(names: tuple[str, ...], order=lex) -> PolyRing:
    return PolyRing(names, QQ, order)


@functools.lru_cache(maxsize=None)
def frac_field(names: tuple[str, ...]) -> FracField:
    return FracField(names, QQ, lex)


def canonical(expr) -> sp.Expr:
    """Lowest-terms normal form of a rational expression over Q."""
    return sp.cancel(sp.sympify(expr))


def is_zero(expr) -> bool:
    return canonical(expr) == 0


# -- parameter field ---------------------------------------------------------


@dataclass(frozen=True)
class ParamField:
    """Q(params) with a declared, ordered list of generators.

    Elements are plain sympy expressions kept in ``cancel`` normal form, so
    equality of elements is structural equality.
    """

    names: tuple[str, ...] = ()

    @property
    def symbols(self) -> tuple[sp.Symbol, ...]:
        return tuple(sym(s) for s in self.names)

    def __call__(self, value) -> sp.Expr:
        expr = canonical(value)
        foreign = {s.name for s in expr.free_symbols} - set(self.names)
        if foreign:
            raise ValueError(f"symbols {sorted(foreign)} are not parameters of this field")
        return expr

    def domain(self):
        return QQ if not self.names else QQ.frac_field(*self.symbols)

    def extend(self, more: Iterable[str]) -> "ParamField":
        names = list(self.names)
        for m in more:
            if m not in names:
                names.append(m)
        return ParamField(tuple(names))


# -- rational functions in n ---------------------------------------------------


def _names_for(symbols: Iterable[sp.Symbol]) -> tuple[str, ...]:
    others = sorted({s.name for s in symbols} - {"n"})
    return tuple(others) + ("n",)


class RatFuncN:
    """A rational function in ``n`` over Q(params), always in lowest terms."""

    __slots__ = ("_elem",)

    def __init__(self, value=0, *, elem: FracElement | None = None):
        if elem is None:
            expr = sp.sympify(value)
            if isinstance(value, RatFuncN):
                elem = value._elem
            else:
                elem = frac_field(_names_for(expr.free_symbols)).from_expr(expr)
        self._elem = elem

    # construction helpers
    @classmethod
    def from_elem(cls, elem: FracElement) -> "RatFuncN":
        if "n" not in [str(s) for s in elem.field.symbols]:
            return cls(elem.as_expr())
        return cls(elem=elem)

    @property
    def elem(self) -> FracElement:
        return self._elem

    @property
    def field(self) -> FracField:
        return self._elem.field

    def _n_index(self) -> int:
        return [str(s) for s in self.field.symbols].index("n")

    def _unify(self, other) -> tuple[FracElement, FracElement]:
        if not isinstance(other, RatFuncN):
            other = RatFuncN(other)
        if other.field == self.field:
            return self._elem, other._elem
        names = _names_for(set(self.field.symbols) | set(other.field.symbols))
        K = frac_field(names)
        return K.from_expr(self.as_expr()), K.from_expr(other.as_expr())

    # arithmetic
    def __add__(self, other):
        x, y = self._unify(other)
        return RatFuncN(elem=x + y)

    __radd__ = __add__

    def __sub__(self, other):
        x, y = self._unify(other)
        return RatFuncN(elem=x - y)

    def __rsub__(self, other):
        x, y = self._unify(other)
        return RatFuncN(elem=y - x)

    def __mul__(self, other):
        x, y = self._unify(other)
        return RatFuncN(elem=x * y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        x, y = self._unify(other)
        if not y:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFuncN(elem=x / y)

    def __rtruediv__(self, other):
        x, y = self._unify(other)
        if not x:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFuncN(elem=y / x)

    def __neg__(self):
        return RatFuncN(elem=-self._elem)

    def __pow__(self, k: int):
        if k < 0 and not self._elem:
            raise ZeroDivisionError("negative power of zero")
        return RatFuncN(elem=self._elem**k)

    def __eq__(self, other):
        try:
            x, y = self._unify(other)
        except (TypeError, sp.SympifyError):
            return NotImplemented
        return x == y

    def __hash__(self):
        return hash(sp.srepr(self.as_expr()))

    def __bool__(self):
        return bool(self._elem)

    def is_zero(self) -> bool:
        return not self._elem

    # structure
    @property
    def numerator(self) -> sp.Expr:
        return self._elem.numer.as_expr()

    @property
    def denominator(self) -> sp.Expr:
        return self._elem.denom.as_expr()

    def num_degree(self) -> int:
        return max(self._elem.numer.degree(self._n_index()), 0)

    def den_degree(self) -> int:
        return max(self._elem.denom.degree(self._n_index()), 0)

    def is_constant(self) -> bool:
        return self._elem.numer.degree(self._n_index()) <= 0 and self._elem.denom.degree(self._n_index()) <= 0

    def shift(self, k) -> "RatFuncN":
        """Return the function n -> self(n + k)."""
        K = self.field
        ng = K.ring.gens[self._n_index()]
        num = self._elem.numer.compose(ng, ng + k)
        den = self._elem.denom.compose(ng, ng + k)
        return RatFuncN(elem=K.new(num, den))

    def subs(self, mapping: dict) -> "RatFuncN":
        return RatFuncN(self.as_expr().subs(mapping))

    def __call__(self, n0) -> sp.Expr:
        den = self._elem.denom.as_expr().subs(N, n0)
        if canonical(den) == 0:
            raise ZeroDivisionError(f"pole at n = {n0}")
        return canonical(self._elem.numer.as_expr().subs(N, n0) / den)

    def as_expr(self) -> sp.Expr:
        return self._elem.as_expr()

    def factored(self) -> sp.Expr:
        return sp.factor(self.as_expr())

    def __str__(self):
        return sp.sstr(self.factored())

    def __repr__(self):
        return f"RatFuncN({self})"


# -- quadratic extension numbers ----------------------------------------------


def square_split(r) -> tuple[sp.Expr, sp.Expr]:
    """Write r = m^2 * s with s squarefree; returns (m, s)."""
    r = canonical(r)
    if r == 0:
        return sp.Integer(0), sp.Integer(0)
    num, den = sp.fraction(r)
    coeff, factors = sp.factor_list(sp.expand(num * den))
    m = sp.Integer(1)
    s = sp.Integer(1)
    c = sp.Rational(coeff)
    if c < 0:
        s = -s
        c = -c
    root = sp.sqrt(c)
    cm, crest = root.as_coeff_Mul()
    m *= cm
    s *= crest**2 if crest != 1 else 1
    for f, k in factors:
        m *= f ** (k // 2)
        if k % 2:
            s *= f
    return canonical(m / den), canonical(s)


@dataclass(frozen=True)
class QuadExtNum:
    """p + q*sqrt(r) with p, q, r in Q(params) and r not a square."""

    p: sp.Expr
    q: sp.Expr
    r: sp.Expr

    @classmethod
    def make(cls, p, q=0, r=1) -> "QuadExtNum":
        p, q = canonical(p), canonical(q)
        m, s = square_split(r)
        if q == 0 or s == 0:
            return cls(p, sp.Integer(0), sp.Integer(1))
        if s == 1:
            return cls(canonical(p + q * m), sp.Integer(0), sp.Integer(1))
        return cls(p, canonical(q * m), s)

    @classmethod
    def lift(cls, value) -> "QuadExtNum":
        if isinstance(value, QuadExtNum):
            return value
        return cls(canonical(value), sp.Integer(0), sp.Integer(1))

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def _pair(self, other) -> tuple["QuadExtNum", "QuadExtNum", sp.Expr]:
        other = QuadExtNum.lift(other)
        if self.q == 0:
            return self, other, other.r
        if other.q == 0 or other.r == self.r:
            return self, other, self.r
        raise ValueError("operands live in different quadratic extensions")

    def __add__(self, other):
        x, y, r = self._pair(other)
        return QuadExtNum.make(x.p + y.p, x.q + y.q, r)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtNum(canonical(-self.p), canonical(-self.q), self.r)

    def __sub__(self, other):
        return self + (-QuadExtNum.lift(other))

    def __rsub__(self, other):
        return QuadExtNum.lift(other) + (-self)

    def __mul__(self, other):
        x, y, r = self._pair(other)
        return QuadExtNum.make(x.p * y.p + x.q * y.q * r, x.p * y.q + x.q * y.p, r)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExtNum":
        return QuadExtNum(self.p, canonical(-self.q), self.r)

    def norm(self) -> sp.Expr:
        return canonical(self.p**2 - self.q**2 * self.r)

    def inverse(self) -> "QuadExtNum":
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadExtNum.make(self.p / nrm, -self.q / nrm, self.r)

    def __truediv__(self, other):
        return self * QuadExtNum.lift(other).inverse()

    def __rtruediv__(self, other):
        return QuadExtNum.lift(other) * self.inverse()

    def __pow__(self, k: int):
        base = self if k >= 0 else self.inverse()
        out = QuadExtNum.lift(1)
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    def __eq__(self, other):
        if not isinstance(other, QuadExtNum):
            try:
                other = QuadExtNum.lift(other)
            except (TypeError, sp.SympifyError):
                return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash((sp.srepr(self.p), sp.srepr(self.q), sp.srepr(self.r)))

    def as_expr(self) -> sp.Expr:
        return self.p + self.q * sp.sqrt(self.r)

    def __str__(self):
        return sp.sstr(self.as_expr())


def horner(coeffs_high_first: list, value):
    """Evaluate a polynomial given by coefficients (highest first) at value."""
    acc = QuadExtNum.lift(0) if isinstance(value, QuadExtNum) else sp.Integer(0)
    for c in coeffs_high_first:
        acc = acc * value + c
    return acc


def eval_rational(expr, var: sp.Symbol, value):
    """Evaluate a rational expression in ``var`` at a QuadExtNum or expression."""
    if not isinstance(value, QuadExtNum):
        return canonical(sp.sympify(expr).subs(var, value))
    num, den = sp.fraction(canonical(expr))
    nv = horner(sp.Poly(num, var).all_coeffs(), value)
    dv = horner(sp.Poly(den, var).all_coeffs(), value)
    if isinstance(dv, QuadExtNum) and dv.is_zero():
        raise ZeroDivisionError("denominator vanishes at the algebraic point")
    return nv / dv if isinstance(nv, QuadExtNum) else QuadExtNum.lift(nv) / dv


# -- univariate utilities -------------------------------------------------------


def _as_poly(p, var=None) -> sp.Poly:
    if isinstance(p, sp.Poly):
        return p
    if isinstance(p, PolyElement):
        p = p.as_expr()
    expr = sp.sympify(p)
    if var is None:
        free = sorted(expr.free_symbols, key=lambda s: s.name)
        var = free[0] if free else N
    return sp.Poly(expr, var)


def poly_gcd(p, q) -> sp.Poly:
    """Monic gcd of two univariate polynomials; gcd(0, 0) = 0."""
    p, q = _as_poly(p), _as_poly(q)
    if p.gens != q.gens:
        q = sp.Poly(q.as_expr(), *p.gens)
    g = p.gcd(q)
    if g.is_zero:
        return g
    return g.monic()


def rational_roots(p, var=None) -> set[Fraction]:
    """All rational roots of a nonzero univariate polynomial with rational coefficients."""
    poly = _as_poly(p, var)
    if poly.is_zero:
        raise ZeroPolynomial("rational_roots of the zero polynomial")
    if len(poly.gens) != 1:
        raise ValueError("rational_roots expects a univariate polynomial")
    roots: set[Fraction] = set()
    for factor, _ in poly.factor_list()[1]:
        if factor.degree() == 1:
            c1, c0 = factor.all_coeffs()
            roots.add(to_rat(-c0 / c1))
    return roots


def identically_vanishing_points(expr, var: sp.Symbol = N) -> set[Fraction]:
    """Rational values v such that expr|_{var=v} is identically zero in all other symbols.

    These are the rational roots of the gcd (over Q[var]) of the coefficients of
    expr viewed as a polynomial in the remaining symbols.
    """
    expr = sp.expand(sp.sympify(expr))
    if expr == 0:
        raise ZeroPolynomial("expression is identically zero")
    others = sorted(expr.free_symbols - {var}, key=lambda s: s.name)
    if not others:
        if var not in expr.free_symbols:
            return set()
        return rational_roots(sp.Poly(expr, var))
    coeffs = sp.Poly(expr, *others).coeffs()
    g = sp.Poly(coeffs[0], var)
    for c in coeffs[1:]:
        g = g.gcd(sp.Poly(c, var))
    if g.degree() <= 0:
        return set()
    return rational_roots(g)
