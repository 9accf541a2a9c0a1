"""Forward direction: structure relations from (sigma, tau) and a standardization.

All quantities are rational functions in n over Q(params), computed in one
sympy fraction field and returned as RatFuncN.
"""
from __future__ import annotations

from dataclasses import dataclass

import sympy as sp

from .algebra import X, RatFuncN, frac_field
from .errors import DegenerateEquation, UndefinedRatio
from .exprio import EquationData, RecurrenceEq
from .recursions import continuous_ratio_step, discrete_ratio_step
from .standard import MONIC, Standardization, standardization


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """p_{n+1} = (A x + B) p_n - C p_{n-1}; Btilde, Ctilde are the monic versions."""

    A: RatFuncN
    B: RatFuncN
    C: RatFuncN
    Btilde: RatFuncN
    Ctilde: RatFuncN


@dataclass(frozen=True)
class RuleCoeffs:
    """sigma D p_n = alpha p_{n+1} + beta p_n + gamma p_{n-1} (D = d/dx or backward difference).

    The tilde variants express the same rule as sigma D p_n = (alphaT x + betaT) p_n + gammaT p_{n-1}.
    """

    alpha: RatFuncN
    beta: RatFuncN
    gamma: RatFuncN
    alphaT: RatFuncN
    betaT: RatFuncN
    gammaT: RatFuncN


DerivativeRuleCoeffs = RuleCoeffs
DifferenceRuleCoeffs = RuleCoeffs


@dataclass(frozen=True)
class RatioReport:
    lambda_n: RatFuncN
    kprime_over_k: RatFuncN
    kpp_over_k: RatFuncN
    kprime_ratio: RatFuncN | None
    h_ratio: RatFuncN
    E_ratio: RatFuncN | None
    D_ratio: RatFuncN | None


@dataclass(frozen=True)
class Relations:
    """``exceptional`` lists degrees n >= 1 where the closed forms hold only as a limit.

    When d = a != 0 the factor a(2n-3) + d vanishes at n = 1 together with
    a(n-2) + d, so the rational functions carry the cancelled limit there and
    the actual C_1 and gamma_1 differ.
    """

    recurrence: RecurrenceCoeffs
    rule: RuleCoeffs
    ratios: RatioReport
    exceptional: tuple[int, ...] = ()

    def __iter__(self):
        return iter((self.recurrence, self.rule, self.ratios))


class _Ctx:
    """Shared fraction field holding the equation coefficients, the ratio and n."""

    def __init__(self, eq: EquationData, std: Standardization):
        exprs = list(eq.coefficients) + [std.kratio.as_expr()]
        names = sorted({s.name for ex in exprs for s in ex.free_symbols} - {"n"}) + ["n"]
        self.K = frac_field(tuple(names))
        self.n = self.K.gens[-1]
        self.a, self.b, self.c, self.d, self.e = (self.K.from_expr(v) for v in eq.coefficients)
        self.A = self.K.from_expr(std.kratio.as_expr())

    def shift(self, f, k: int = 1):
        ng = self.K.ring.gens[-1]
        return self.K.new(f.numer.compose(ng, ng + k), f.denom.compose(ng, ng + k))

    @staticmethod
    def wrap(f) -> RatFuncN:
        return RatFuncN.from_elem(f)


def _check(eq: EquationData, kind: str) -> None:
    if eq.kind != kind:
        raise ValueError(f"expected {kind} equation data, got {eq.kind}")
    if eq.a == 0 and eq.d == 0 and eq.b == 0:
        raise DegenerateEquation("a = b = d = 0: lambda_n vanishes and tau has no x-dependence")


def _finish(x: _Ctx, Bt, Ct, beta, gamma, kp, kpp, E, D) -> Relations:
    n, A, a = x.n, x.A, x.a
    A1 = x.shift(A, -1)
    B = A * Bt
    C = A * A1 * Ct
    alpha = a * n / A
    alphaT = alpha * A
    betaT = alpha * B + beta
    gammaT = gamma - alpha * C
    lam = -(a * n * (n - 1) + x.d * n)
    h_ratio = x.shift(C, 1) * A / x.shift(A, 1)
    kprime_ratio = x.shift(kp, 1) / kp * A if kp else None
    w = _Ctx.wrap
    rec = RecurrenceCoeffs(w(A), w(B), w(C), w(Bt), w(Ct))
    rule = RuleCoeffs(w(alpha), w(beta), w(gamma), w(alphaT), w(betaT), w(gammaT))
    ratios = RatioReport(
        w(lam), w(kp), w(kpp), w(kprime_ratio) if kprime_ratio is not None else None, w(h_ratio), w(E) if E is not None else None, w(D) if D is not None else None
    )
    exceptional = (1,) if x.a and not (x.d - a) else ()
    return Relations(rec, rule, ratios, exceptional)


def continuous_relations(eq: EquationData, std: Standardization | None = None) -> Relations:
    """Recurrence, derivative rule and coefficient ratios for sigma y'' + tau y' + lambda_n y = 0."""
    _check(eq, "continuous")
    x = _Ctx(eq, standardization(std))
    a, b, c, d, e, n, A = x.a, x.b, x.c, x.d, x.e, x.n, x.A
    Bt = (2 * b * n * (a * (n - 1) + d) + e * (d - 2 * a)) / ((2 * a * (n - 1) + d) * (2 * a * n + d))
    Ct = (
        -n * (a * (n - 2) + d) / ((a * (2 * n - 1) + d) * (a * (2 * n - 3) + d))
        * (c + (b * (n - 1) + e) / (2 * a * (n - 1) + d) ** 2 * ((a * e - b * d) - a * b * (n - 1)))
    )
    B = A * Bt
    C = A * x.shift(A, -1) * Ct
    beta = (d * Bt - e) / 2
    gamma = -C * (a * (n - 1) + d) / A
    kp = n * (b * (n - 1) + e) / (2 * a * (n - 1) + d)
    kpp = (
        n * (n - 1) * (n**2 * b**2 - 3 * n * b**2 + 2 * n * b * e + 2 * c * n * a - 2 * c * a - 3 * b * e + 2 * b**2 + e**2 + c * d)
        / (2 * (2 * a * n - 2 * a + d) * (d - 3 * a + 2 * a * n))
    )
    E = (a * (n - 1) + d) / ((a * (2 * n - 1) + d) * (2 * a * n + d)) * A
    D = (n + 1) * E
    return _finish(x, Bt, Ct, beta, gamma, kp, kpp, E, D)


def discrete_relations(eq: EquationData, std: Standardization | None = None) -> Relations:
    """Recurrence, difference rule and coefficient ratios for sigma Delta nabla y + tau Delta y + lambda_n y = 0."""
    _check(eq, "discrete")
    x = _Ctx(eq, standardization(std))
    a, b, c, d, e, n, A = x.a, x.b, x.c, x.d, x.e, x.n, x.A
    A1 = x.shift(A, -1)
    Bt = ((n - 1) * (d + 2 * b) * (a * (n - 1) + a + d) - 2 * a * e + d**2 + d * e + 2 * b * d) / (
        (2 * a * n + d) * (2 * a * (n - 1) + d)
    )
    gamma = (
        A1
        * n * (a * (n - 1) + d) * (a * (n - 2) + d)
        / ((a * (2 * n - 3) + d) * (a * (2 * n - 1) + d) * (2 * a * (n - 1) + d) ** 2)
        * ((n - 1) * (a * (n - 1) + d) * (a**2 * (n - 1) ** 2 + a * (n - 1) * d + 4 * a * c + 2 * a * e - b * d - b**2) + a * e**2 - b * d * e + c * d**2)
    )
    beta = -n * (a * (n - 1) + d) * (2 * (n - 1) * a * (a * (n - 1) + a + d) + a * d + 2 * a * e - b * d) / (
        (2 * a * n + d) * (2 * a * (n - 1) + d)
    )
    lead = a * (n - 1) + d
    if not lead:
        raise DegenerateEquation("a(n-1) + d vanishes identically")
    C = -A * gamma / lead
    Ct = C / (A * A1)
    # discrete analogues of the first two coefficient ratios, from the coefficient recursion
    kp = discrete_ratio_step(1, n, (a, b, c, d, e), [x.K.one])
    kpp = discrete_ratio_step(2, n, (a, b, c, d, e), [x.K.one, kp])
    # d = 0 occurs for degenerate solutions; the Rodrigues ratio is then undefined
    E = (a * (n - 1) + d) / ((a * (2 * n - 1) + d) * d) * A if d else None
    return _finish(x, Bt, Ct, beta, gamma, kp, kpp, E, None)


def relations(eq: EquationData, std: Standardization | None = None) -> Relations:
    if eq.kind == "continuous":
        return continuous_relations(eq, std)
    return discrete_relations(eq, std)


def coefficient_ratio(eq: EquationData, level: int) -> RatFuncN:
    """a_{n-level}/a_n for generic n, from the downward coefficient recursion."""
    if level < 0:
        raise ValueError("level must be nonnegative")
    x = _Ctx(eq, MONIC)
    step = continuous_ratio_step if eq.kind == "continuous" else discrete_ratio_step
    coeffs = (x.a, x.b, x.c, x.d, x.e)
    r = [x.K.one]
    for m in range(1, level + 1):
        r.append(step(m, x.n, coeffs, r))
    return _Ctx.wrap(r[level])


def higher_coefficient_ratios(eq: EquationData, std: Standardization | None, level: int) -> RatFuncN:
    """k^{(level)}_{n+1}/k^{(level)}_n where k^{(m)}_n is the coefficient of x^{n-m} in p_n."""
    if level not in (2, 3, 4):
        raise ValueError("level must be 2, 3 or 4")
    std = standardization(std)
    r = coefficient_ratio(eq, level)
    if r.is_zero():
        raise UndefinedRatio(f"the coefficient of x^(n-{level}) vanishes identically")
    return r.shift(1) / r * std.kratio


def recurrence_from_relations(rel: Relations, params=()) -> RecurrenceEq:
    """The recurrence p_{n+2} = (A(n+1) x + B(n+1)) p_{n+1} - C(n+1) p_n with denominators cleared."""
    A, B, C = (f.shift(1).as_expr() for f in (rel.recurrence.A, rel.recurrence.B, rel.recurrence.C))
    r = sp.together(-(A * X + B))
    s = sp.together(C)
    den = sp.lcm(sp.denom(r), sp.denom(s))
    return RecurrenceEq(den, sp.cancel(r * den), sp.cancel(s * den), params=params)
