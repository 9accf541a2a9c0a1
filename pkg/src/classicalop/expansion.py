"""Explicit expansion of polynomial solutions and independent checks.

* :func:`expand_continuous` / :func:`expand_discrete` run the downward coefficient
  recursions row by row;
* :func:`moment_oracle` builds monic orthogonal polynomials by Gram-Schmidt on
  exact moments (used only as a test oracle);
* :func:`verify_solution` substitutes expanded rows into the equation itself;
* :func:`symmetric_square` computes a recurrence for the squares of the
  solutions of a linear recurrence.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Sequence

import sympy as sp
from sympy.functions.combinatorial.numbers import stirling

from .algebra import N, X, canonical, frac_field, to_rat
from .errors import DegenerateFamily, DegenerateMoments, KernelNotFound
from .exprio import EquationData, RecurrenceEq
from .recursions import continuous_ratio_step, discrete_ratio_step
from .standard import Standardization, standardization


# -- coefficient tables ----------------------------------------------------------------


@dataclass(frozen=True)
class CoefficientTable:
    """rows[n][k] is the coefficient of x^k in p_n (0 <= k <= n <= n_max)."""

    eq: EquationData
    rows: tuple[tuple[sp.Expr, ...], ...]

    @property
    def n_max(self) -> int:
        return len(self.rows) - 1

    def coefficient(self, n: int, k: int) -> sp.Expr:
        return self.rows[n][k] if k <= n else sp.Integer(0)

    def poly(self, n: int, x=X) -> sp.Expr:
        return sp.expand(sum(c * x**k for k, c in enumerate(self.rows[n])))

    def with_row(self, n: int, row: Sequence) -> "CoefficientTable":
        rows = list(self.rows)
        rows[n] = tuple(canonical(v) for v in row)
        return CoefficientTable(self.eq, tuple(rows))


class _Domain:
    """Exact arithmetic for one table: Fractions when everything is rational, else Q(params)."""

    def __init__(self, exprs: Sequence[sp.Expr]):
        syms = sorted({s.name for e in exprs for s in sp.sympify(e).free_symbols})
        self.K = frac_field(tuple(syms)) if syms else None

    def __call__(self, v):
        if self.K is None:
            return to_rat(sp.sympify(v)) if not isinstance(v, (int, Fraction)) else Fraction(v)
        return self.K.from_expr(sp.sympify(v))

    def out(self, v) -> sp.Expr:
        if self.K is None:
            return sp.Rational(v.numerator, v.denominator)
        return v.as_expr()


def _expand(eq: EquationData, std, n_max: int, step: Callable) -> CoefficientTable:
    std = standardization(std)
    leads = [std.leading(n) for n in range(n_max + 1)]
    dom = _Domain(list(eq.coefficients) + leads)
    coeffs = tuple(dom(v) for v in eq.coefficients)
    rows = []
    for n in range(n_max + 1):
        kn = dom(leads[n])
        if not kn:
            raise DegenerateFamily(n, n, f"k_{n} vanishes")
        r = [dom(1)]
        for m in range(1, n + 1):
            try:
                r.append(step(m, n, coeffs, r))
            except ZeroDivisionError:
                raise DegenerateFamily(n, n - m) from None
        rows.append(tuple(dom.out(r[n - k] * kn) for k in range(n + 1)))
    return CoefficientTable(eq, tuple(rows))


def expand_continuous(eq: EquationData, std: Standardization | str | None = None, n_max: int = 8) -> CoefficientTable:
    """Power-basis coefficients of the polynomial solutions of sigma y'' + tau y' + lambda_n y = 0."""
    if eq.kind != "continuous":
        raise ValueError("expand_continuous needs continuous equation data")
    return _expand(eq, std, n_max, continuous_ratio_step)


def expand_discrete(eq: EquationData, std: Standardization | str | None = None, n_max: int = 6) -> CoefficientTable:
    """Power-basis coefficients of the polynomial solutions of the difference equation."""
    if eq.kind != "discrete":
        raise ValueError("expand_discrete needs discrete equation data")
    return _expand(eq, std, n_max, discrete_ratio_step)


def expand(eq: EquationData, std=None, n_max: int = 8) -> CoefficientTable:
    return expand_continuous(eq, std, n_max) if eq.kind == "continuous" else expand_discrete(eq, std, n_max)


# -- direct verification -------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    checked: tuple[int, ...]
    failures: tuple[tuple[int, sp.Expr], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok


def apply_operator(eq: EquationData, poly: sp.Expr, n: int, x=X) -> sp.Expr:
    """sigma y'' + tau y' + lambda_n y (continuous) or sigma Delta nabla y + tau Delta y + lambda_n y."""
    lam = -(eq.a * n * (n - 1) + eq.d * n)
    sigma, tau = eq.sigma(x), eq.tau(x)
    if eq.kind == "continuous":
        out = sigma * sp.diff(poly, x, 2) + tau * sp.diff(poly, x) + lam * poly
    else:
        up, down = poly.subs(x, x + 1), poly.subs(x, x - 1)
        out = sigma * (up - 2 * poly + down) + tau * (up - poly) + lam * poly
    return sp.expand(out)


def verify_solution(eq: EquationData, table: CoefficientTable) -> Verdict:
    """Substitute every row of the table into the equation; collect nonzero residuals."""
    failures = []
    for n in range(table.n_max + 1):
        residual = apply_operator(eq, table.poly(n), n)
        if canonical(residual) != 0:
            failures.append((n, residual))
    return Verdict(tuple(range(table.n_max + 1)), tuple(failures))


# -- moment oracle ------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilySpec:
    """A weight given through its normalized moments m_k/m_0 (exact rationals)."""

    name: str
    moments: Callable[[int], list]
    support: str = ""
    parameters: tuple = field(default_factory=tuple)


def _poch(a, k: int):
    out = Fraction(1)
    for i in range(k):
        out *= a + i
    return out


def _raw_from_factorial(fact: Callable[[int], Fraction], count: int) -> list:
    """Raw moments E[x^k] from factorial moments E[x(x-1)...(x-j+1)]."""
    return [sum(Fraction(int(stirling(k, j))) * fact(j) for j in range(k + 1)) for k in range(count)]


def hermite_weight() -> FamilySpec:
    def moments(count):
        out = []
        for k in range(count):
            if k % 2:
                out.append(Fraction(0))
            else:
                j = k // 2
                out.append(Fraction(factorial(2 * j), factorial(j) * 4**j))
        return out

    return FamilySpec("Hermite", moments, "(-oo, oo)")


def laguerre_weight(alpha) -> FamilySpec:
    alpha = Fraction(alpha)
    return FamilySpec("Laguerre", lambda count: [_poch(alpha + 1, k) for k in range(count)], "[0, oo)", (alpha,))


def jacobi_weight(alpha, beta) -> FamilySpec:
    """(1-x)^alpha (1+x)^beta on [-1, 1]."""
    alpha, beta = Fraction(alpha), Fraction(beta)

    def moments(count):
        # x = 2t - 1 with t ~ Beta(beta+1, alpha+1)
        beta_m = [_poch(beta + 1, j) / _poch(alpha + beta + 2, j) for j in range(count)]
        return [sum(comb(k, j) * 2**j * (-1) ** (k - j) * beta_m[j] for j in range(k + 1)) for k in range(count)]

    return FamilySpec("Jacobi", moments, "[-1, 1]", (alpha, beta))


def bessel_functional(alpha) -> FamilySpec:
    """Moment functional of the Bessel polynomials with sigma = x^2, tau = (alpha+2)x + 2."""
    alpha = Fraction(alpha)
    return FamilySpec("Bessel", lambda count: [Fraction((-2) ** k) / _poch(alpha + 2, k) for k in range(count)], "unit circle", (alpha,))


def charlier_weight(mu) -> FamilySpec:
    mu = Fraction(mu)
    return FamilySpec("Charlier", lambda count: _raw_from_factorial(lambda j: mu**j, count), "{0, 1, 2, ...}", (mu,))


def meixner_weight(gamma, mu) -> FamilySpec:
    gamma, mu = Fraction(gamma), Fraction(mu)
    ratio = mu / (1 - mu)
    return FamilySpec(
        "Meixner", lambda count: _raw_from_factorial(lambda j: _poch(gamma, j) * ratio**j, count), "{0, 1, 2, ...}", (gamma, mu)
    )


def krawtchouk_weight(p, N_: int) -> FamilySpec:
    p = Fraction(p)

    def fact(j):
        out = Fraction(1)
        for i in range(j):
            out *= N_ - i
        return out * p**j

    return FamilySpec("Krawchouk", lambda count: _raw_from_factorial(fact, count), f"{{0, ..., {N_}}}", (p, N_))


def discrete_weight(ratio: Callable[[int], Fraction], cutoff: int) -> Callable[[int], list]:
    """Moments of rho on {0..cutoff-1} with rho(0) = 1 and rho(x+1) = ratio(x) rho(x).

    Exact for weights whose support ends before the cutoff (ratio hits 0).
    """

    def moments(count):
        weights = [Fraction(1)]
        for x in range(cutoff - 1):
            weights.append(weights[-1] * ratio(x))
        total = sum(weights)
        return [sum(w * Fraction(x) ** k for x, w in enumerate(weights)) / total for k in range(count)]

    return moments


def hahn_weight(alpha, beta, N_: int) -> FamilySpec:
    """First-kind Hahn weight on {0..N-1}: rho(x+1)/rho(x) = (x+beta+1)(N-1-x)/((x+1)(N+alpha-1-x))."""
    alpha, beta = Fraction(alpha), Fraction(beta)

    def ratio(x):
        return (x + beta + 1) * (N_ - 1 - x) / ((x + 1) * (N_ + alpha - 1 - x))

    return FamilySpec("Hahn-1", discrete_weight(ratio, N_), f"{{0, ..., {N_ - 1}}}", (alpha, beta, N_))


def moment_oracle(weight: FamilySpec, n_max: int) -> list[list[Fraction]]:
    """Monic orthogonal polynomials p_0..p_{n_max} (coefficient lists, low degree first)."""
    m = [Fraction(v) for v in weight.moments(2 * n_max + 1)]
    if m[0] != 1:
        m = [v / m[0] for v in m]

    def inner_monomial(i: int, p: list) -> Fraction:
        return sum(c * m[i + j] for j, c in enumerate(p))

    polys: list[list[Fraction]] = []
    norms: list[Fraction] = []
    for n in range(n_max + 1):
        p = [Fraction(0)] * n + [Fraction(1)]
        for j, q in enumerate(polys):
            coef = inner_monomial(n, q) / norms[j]
            for i, c in enumerate(q):
                p[i] -= coef * c
        norm = inner_monomial(n, p)
        if norm == 0 and n < n_max:
            raise DegenerateMoments(n)
        polys.append(p)
        norms.append(norm)
    return polys


# -- symmetric square -----------------------------------------------------------------------


@dataclass(frozen=True)
class HolonomicRecurrence:
    """sum_i coeffs[i](n, x) * y(n+i) = 0, coefficients polynomial after normalization."""

    coeffs: tuple[sp.Expr, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def apply(self, seq: Sequence, n: int, x_value=None) -> sp.Expr:
        total = 0
        for i, c in enumerate(self.coeffs):
            c = c.subs(N, n)
            if x_value is not None:
                c = c.subs(X, x_value)
            total += c * seq[n + i]
        return canonical(total)

    def __str__(self):
        return " + ".join(f"({sp.factor(c)})*S[n+{i}]" for i, c in enumerate(self.coeffs)) + " = 0"


def _as_holonomic(rec) -> HolonomicRecurrence:
    if isinstance(rec, HolonomicRecurrence):
        return rec
    if isinstance(rec, RecurrenceEq):
        return HolonomicRecurrence((rec.s, rec.r, rec.q))
    return HolonomicRecurrence(tuple(sp.sympify(c) for c in rec))


def _strip(rec: HolonomicRecurrence) -> HolonomicRecurrence:
    """Drop vanishing trailing/leading coefficients (re-indexing when the lowest vanishes)."""
    coeffs = [sp.expand(c) for c in rec.coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    shift = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        shift += 1
    if len(coeffs) < 2:
        raise KernelNotFound("recurrence has fewer than two nonzero coefficients")
    if shift:
        coeffs = [c.subs(N, N - shift) for c in coeffs]
    return HolonomicRecurrence(tuple(coeffs))


def _normalize_kernel(vec: list[sp.Expr]) -> tuple[sp.Expr, ...]:
    """Clear denominators, remove the polynomial content, fix the sign."""
    vec = [sp.factor(canonical(v)) for v in vec]
    den = sp.Integer(1)
    for v in vec:
        den = sp.lcm(den, sp.fraction(sp.together(v))[1])
    vec = [sp.expand(canonical(v * den)) for v in vec]
    g = sp.Integer(0)
    for v in vec:
        g = sp.gcd(g, v)
    vec = [sp.expand(canonical(v / g)) for v in vec]
    lead = next(v for v in reversed(vec) if v != 0)
    syms = sorted(lead.free_symbols, key=lambda s: s.name)
    lc = sp.Poly(lead, *syms).LC() if syms else lead
    if lc < 0:
        vec = [-v for v in vec]
    return tuple(vec)


def symmetric_square(rec) -> HolonomicRecurrence:
    """A recurrence of minimal order for y(n)^2, where y solves ``rec``.

    Products y(n+i) y(n+j) are rewritten in the basis {y(n+i) y(n+j): 0 <= i <= j < r}
    using the input recurrence; S(n+k) = y(n+k)^2 gives one coordinate vector per k
    and the first linear dependency among them is the answer.
    """
    rec = _strip(_as_holonomic(rec))
    r = rec.order
    syms = sorted({s.name for c in rec.coeffs for s in c.free_symbols} | {"n"})
    K = frac_field(tuple(syms))
    ng = K.gens[syms.index("n")]
    ring_n = K.ring.gens[syms.index("n")]
    coeffs = [K.from_expr(c) for c in rec.coeffs]

    def shift(f, k):
        return K.new(f.numer.compose(ring_n, ring_n + k), f.denom.compose(ring_n, ring_n + k))

    lead = coeffs[-1]
    # y(n+r) = sum_i rel[i] y(n+i)
    rel = [-c / lead for c in coeffs[:-1]]
    # express y(n+k) as a vector over y(n), ..., y(n+r-1)
    lin = []
    for k in range(r):
        v = [K.zero] * r
        v[k] = K.one
        lin.append(v)
    basis = [(i, j) for i in range(r) for j in range(i, r)]
    dim = len(basis)

    def square(v):
        out = {b: K.zero for b in basis}
        for i in range(r):
            for j in range(r):
                if v[i] and v[j]:
                    key = (min(i, j), max(i, j))
                    out[key] += v[i] * v[j]
        return [out[b] for b in basis]

    rows = []
    for k in range(dim + 1):
        if k >= r:
            prev = lin[k - r : k]
            rk = [shift(c, k - r) for c in rel]
            new = [K.zero] * r
            for coef, vec in zip(rk, prev):
                for t in range(r):
                    new[t] += coef * vec[t]
            lin.append(new)
        rows.append(square(lin[k]))
        if k == 0:
            continue
        kernel = _left_kernel(rows, K)
        if kernel is not None:
            vec = [c.as_expr() for c in kernel]
            out = HolonomicRecurrence(_normalize_kernel(vec))
            return _strip(out)
    raise KernelNotFound("no dependency among the squared shifts")


def _left_kernel(rows: list[list], K):
    """A nonzero vector c with sum_i c_i rows[i] = 0, or None (Gaussian elimination over K)."""
    m = len(rows)
    cols = len(rows[0])
    # augment each row with the identity to track combinations
    aug = [list(rows[i]) + [K.one if j == i else K.zero for j in range(m)] for i in range(m)]
    piv_row = 0
    for col in range(cols):
        pivot = next((i for i in range(piv_row, m) if aug[i][col]), None)
        if pivot is None:
            continue
        aug[piv_row], aug[pivot] = aug[pivot], aug[piv_row]
        p = aug[piv_row][col]
        for i in range(m):
            if i != piv_row and aug[i][col]:
                f = aug[i][col] / p
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[piv_row])]
        piv_row += 1
        if piv_row == m:
            break
    for i in range(piv_row, m):
        if all(not aug[i][c] for c in range(cols)):
            return aug[i][cols:]
    return None
