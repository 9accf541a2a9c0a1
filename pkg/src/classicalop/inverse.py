"""Inverse direction: decide whether a three-term recurrence has classical solutions.

Pipeline: :func:`compute_shift` -> :func:`extract_monic` -> :func:`solve_continuous`
or :func:`solve_discrete` -> classification in :mod:`classicalop.families`.

The monic coefficients B~ and C~ of the input are matched against their closed
forms in terms of the equation coefficients (a, b, c, d, e).  Both sides are
cleared of denominators and the coefficients of every power of n are equated,
which gives a polynomial system in (a, b, c, d, e), the unknown-mode
parameters and, for difference equations, the affine map x -> (x - g)/f.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import sympy as sp

from .algebra import N, X, RatFuncN, canonical, identically_vanishing_points, poly_ring, sym
from .errors import DegreeBoundExceeded, NoSolution, NotOrthogonalShape, SolverIncomplete
from .exprio import RecurrenceEq
from .groebner import Budget
from .solver import Component, TriangularSystem, solve_system

EQ_UNKNOWNS = ("a", "b", "c", "d", "e")
AFFINE_UNKNOWNS = ("f", "g")
RESERVED = set(EQ_UNKNOWNS + AFFINE_UNKNOWNS + ("n", "x"))

# (name, fixed values) for each homogeneity representative; a = d = 0 makes
# lambda_n vanish and the closed forms meaningless, so those branches are empty
BRANCHES = (("d=1", {"d": 1}), ("d=0,a=1", {"d": 0, "a": 1}))

BOUNDS = {
    "continuous": {"B": (2, 2), "C": (4, 4)},
    "discrete": {"B": (2, 2), "C": (6, 4)},
}


@dataclass(frozen=True)
class ShiftResult:
    N: int
    shifted: RecurrenceEq
    rule: str = "coefficients"


@dataclass(frozen=True)
class MonicForm:
    """p_{n+1} = (A x + B) p_n - C p_{n-1} in monic form: B~ = B/A, C~ = C/(A_n A_{n-1})."""

    A: RatFuncN
    Btilde: RatFuncN
    Ctilde: RatFuncN

    @property
    def kratio(self) -> RatFuncN:
        return self.A


@dataclass(frozen=True)
class AffineTransform:
    """x -> (x - g)/f; the identity for continuous solutions."""

    f: sp.Expr = sp.Integer(1)
    g: sp.Expr = sp.Integer(0)

    @property
    def is_identity(self) -> bool:
        return self.f == 1 and self.g == 0


# -- shift ------------------------------------------------------------------------------


def _three_term(rec: RecurrenceEq) -> tuple[sp.Expr, sp.Expr, sp.Expr] | None:
    """(A, B, C) as expressions in n when the shape p_{n+1} = (A x + B) p_n - C p_{n-1} holds."""
    q1 = rec.q.subs(N, N - 1)
    t = canonical(-rec.r.subs(N, N - 1) / q1)
    u = canonical(-rec.s.subs(N, N - 1) / q1)
    tn, td = sp.fraction(t)
    if X in td.free_symbols or X in u.free_symbols:
        return None
    tp = sp.Poly(tn, X)
    if tp.degree() != 1:
        return None
    A = canonical(tp.coeff_monomial(X) / td)
    B = canonical(tp.coeff_monomial(1) / td)
    return A, B, canonical(-u)


def _nonnegative_integers(points) -> list[int]:
    return [int(p) for p in points if p.denominator == 1 and p >= 0]


def compute_shift(rec: RecurrenceEq) -> ShiftResult:
    """Smallest N >= 0 such that n -> P_{n+N} has a well-defined three-term structure from n = 0.

    When the recurrence has the three-term shape, N is one more than the largest
    n >= 0 at which A, B or C has a pole or A vanishes, and at least the largest
    m >= 1 with C_m = 0 (the sequence restarts there).  Only values that hold for
    all parameter values count.  Otherwise the identical vanishing of q_{n-1}
    or s_n decides, as a fallback.
    """
    abc = _three_term(rec)
    if abc is not None:
        A, B, C = abc
        blocked: list[int] = []
        for expr in (A, B, C):
            den = sp.fraction(expr)[1]
            if N in den.free_symbols:
                blocked += _nonnegative_integers(identically_vanishing_points(den))
        numA = sp.fraction(A)[0]
        if N in numA.free_symbols:
            blocked += _nonnegative_integers(identically_vanishing_points(numA))
        shift = max(blocked) + 1 if blocked else 0
        numC = sp.fraction(C)[0]
        if numC != 0 and N in numC.free_symbols:
            restart = [m for m in _nonnegative_integers(identically_vanishing_points(numC)) if m >= 1]
            if restart:
                shift = max(shift, max(restart))
        return ShiftResult(shift, rec.shifted(shift) if shift else rec, "coefficients")
    blocked = []
    for expr in (rec.q.subs(N, N - 1), rec.s):
        if N in expr.free_symbols:
            blocked += _nonnegative_integers(identically_vanishing_points(expr))
    shift = max(blocked) + 1 if blocked else 0
    return ShiftResult(shift, rec.shifted(shift) if shift else rec, "vanishing")


# -- monic form --------------------------------------------------------------------------


def extract_monic(shifted: RecurrenceEq, kind: str = "continuous") -> MonicForm:
    """Monic recurrence coefficients, with the shape and degree checks applied."""
    abc = _three_term(shifted)
    if abc is None:
        raise NotOrthogonalShape("t_n must be of degree one in x and u_n must not depend on x")
    A, B, C = (RatFuncN(v) for v in abc)
    Bt = B / A
    Ct = C / (A * A.shift(-1))
    bounds = BOUNDS[kind]
    for label, value, (num_max, den_max) in (("B~", Bt, bounds["B"]), ("C~", Ct, bounds["C"])):
        if value.num_degree() > num_max or value.den_degree() > den_max:
            raise DegreeBoundExceeded(
                f"{label} = {value} has degrees ({value.num_degree()}, {value.den_degree()}), bound ({num_max}, {den_max})"
            )
    return MonicForm(A, Bt, Ct)


# -- closed forms -----------------------------------------------------------------------


def _continuous_forms(a, b, c, d, e, n):
    """(num B~, den B~, num C~, den C~) as polynomials; works in any commutative ring."""
    Bn = 2 * b * n * (a * (n - 1) + d) + e * (d - 2 * a)
    Bd = (2 * a * (n - 1) + d) * (2 * a * n + d)
    w = 2 * a * (n - 1) + d
    Cn = -n * (a * (n - 2) + d) * (c * w**2 + (b * (n - 1) + e) * ((a * e - b * d) - a * b * (n - 1)))
    Cd = (a * (2 * n - 1) + d) * (a * (2 * n - 3) + d) * w**2
    return Bn, Bd, Cn, Cd


def _discrete_forms(a, b, c, d, e, n):
    Bn = (n - 1) * (d + 2 * b) * (a * (n - 1) + a + d) - 2 * a * e + d**2 + d * e + 2 * b * d
    Bd = (2 * a * n + d) * (2 * a * (n - 1) + d)
    bracket = (n - 1) * (a * (n - 1) + d) * (
        a**2 * (n - 1) ** 2 + a * (n - 1) * d + 4 * a * c + 2 * a * e - b * d - b**2
    ) + a * e**2 - b * d * e + c * d**2
    Cn = -n * (a * (n - 2) + d) * bracket
    Cd = (a * (2 * n - 3) + d) * (a * (2 * n - 1) + d) * (2 * a * (n - 1) + d) ** 2
    return Bn, Bd, Cn, Cd


def monic_closed_forms(kind: str, coeffs, n=N):
    """B~ and C~ of the solutions of the equation with coefficients (a, b, c, d, e)."""
    forms = _continuous_forms if kind == "continuous" else _discrete_forms
    Bn, Bd, Cn, Cd = forms(*coeffs, n)
    return Bn / Bd, Cn / Cd


def identity_system(mf: MonicForm, kind: str, fixed: dict | None = None, unknown_params=()) -> tuple[list, tuple[str, ...], tuple[str, ...]]:
    """Polynomial equations (coefficients of powers of n) and the solve unknowns.

    Returns (equations, unknowns by elimination priority, coefficient-field parameters).
    """
    fixed = dict(fixed or {})
    params = sorted(
        ({s.name for s in mf.Btilde.as_expr().free_symbols | mf.Ctilde.as_expr().free_symbols} - {"n"}) - set(unknown_params)
    )
    discrete = kind == "discrete"
    unknowns = (AFFINE_UNKNOWNS if discrete else ()) + tuple(unknown_params) + ("c", "e", "b", "a", "d")
    unknowns = tuple(u for u in unknowns if u not in fixed)
    R = poly_ring(tuple(params) + tuple(unknowns) + ("n",))
    gens = dict(zip(R.symbols, R.gens))
    n = gens[N]

    def var(name):
        return R(fixed[name]) if name in fixed else gens[sym(name)]

    coeffs = [var(v) for v in EQ_UNKNOWNS]
    forms = _continuous_forms if kind == "continuous" else _discrete_forms
    Bn, Bd, Cn, Cd = forms(*coeffs, n)

    def poly_pair(value: RatFuncN):
        num, den = sp.fraction(canonical(value.as_expr()))
        return R.from_expr(sp.expand(num)), R.from_expr(sp.expand(den))

    bin_, bid = poly_pair(mf.Btilde)
    cin, cid = poly_pair(mf.Ctilde)
    if discrete:
        f, g = var("f"), var("g")
        # monic data of x -> (x - g)/f: B~ -> f B~ - g, C~ -> f^2 C~
        lhs_B = (f * bin_ - g * bid) * Bd - bid * Bn
        lhs_C = f**2 * cin * Cd - cid * Cn
    else:
        lhs_B = bin_ * Bd - bid * Bn
        lhs_C = cin * Cd - cid * Cn
    equations = []
    for identity in (lhs_B, lhs_C):
        for k in range(identity.degree(n) + 1):
            coeff = identity.coeff_wrt(n, k)
            if coeff:
                equations.append(coeff.as_expr())
    return equations, unknowns, tuple(params)


@dataclass(frozen=True)
class BranchSolution:
    branch: str
    fixed: dict
    system: TriangularSystem


def _solve(mf: MonicForm, kind: str, unknown_params, budget) -> list[BranchSolution]:
    if not isinstance(budget, Budget):
        budget = Budget(budget if budget is not None else 20000)
    out = []
    for name, fixed in BRANCHES:
        eqs, unknowns, params = identity_system(mf, kind, fixed, unknown_params)
        nonzero = ["f"] if kind == "discrete" else []
        system = solve_system(eqs, unknowns, params=params, nonzero=nonzero, budget=budget)
        out.append(BranchSolution(name, fixed, system))
    return out


def _check_outcome(branches: list[BranchSolution]) -> list[BranchSolution]:
    if not any(len(b.system) for b in branches):
        unresolved = [u for b in branches for u in b.system.unresolved]
        if unresolved:
            raise SolverIncomplete("only unresolved components remain", branches)
        raise NoSolution("the identity system has no solution in any normalization branch")
    return branches


def solve_continuous(mf: MonicForm, unknown_params=(), budget=None) -> list[BranchSolution]:
    """Solutions (a, b, c, d, e, unknown parameters) for each normalization branch."""
    return _check_outcome(_solve(mf, "continuous", tuple(unknown_params), budget))


def solve_discrete(mf: MonicForm, unknown_params=(), budget=None) -> list[BranchSolution]:
    """Solutions (a, ..., e, f, g, unknown parameters); components with f = 0 are discarded."""
    return _check_outcome(_solve(mf, "discrete", tuple(unknown_params), budget))


def component_values(sol: BranchSolution, comp: Component) -> dict:
    """Every solve unknown mapped to its value (free unknowns map to their own symbol)."""
    values = {k: sp.Integer(v) for k, v in sol.fixed.items()}
    for name in sol.system.unknowns:
        v = comp.value(name)
        values[name] = v.as_expr() if hasattr(v, "as_expr") and not isinstance(v, sp.Basic) else v
    return values


# -- full pipeline --------------------------------------------------------------------------


def _shift_ratio(kratio: RatFuncN, shift: int) -> RatFuncN:
    """k_{m+1}/k_m of the unshifted sequence P_m = p_{m-N}."""
    return kratio.shift(-shift) if shift else kratio


def run_algorithm(rec: RecurrenceEq, mode: str = "both", budget=None) -> list:
    """Classical solutions of a three-term recurrence, as classified reports.

    ``mode`` is continuous, discrete or both.  An empty list means no
    classical solution exists.  Shape and degree rejections raise
    NotOrthogonalShape / DegreeBoundExceeded; unresolved factors raise
    SolverIncomplete carrying the partial reports.
    """
    from .families import report_for_component

    if mode not in ("continuous", "discrete", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    clash = RESERVED & {p.name for p in rec.params}
    if clash:
        raise ValueError(f"parameter names {sorted(clash)} are reserved")
    rec = rec.specialized()
    if not isinstance(budget, Budget):
        budget = Budget(budget if budget is not None else 20000)
    shift = compute_shift(rec)
    kinds = ("continuous", "discrete") if mode == "both" else (mode,)
    reports = []
    unresolved = []
    rejections = []
    for kind in kinds:
        try:
            mf = extract_monic(shift.shifted, kind)
        except DegreeBoundExceeded as exc:
            # the discrete bounds are wider, so "both" may still succeed in one mode
            rejections.append(exc)
            continue
        for sol in _solve(mf, kind, rec.unknown_params, budget):
            unresolved.extend(sol.system.unresolved)
            for comp in sol.system:
                reports.append(
                    report_for_component(
                        kind,
                        sol,
                        comp,
                        kratio=mf.kratio,
                        kratio_original=_shift_ratio(mf.kratio, shift.N),
                        shift_N=shift.N,
                    )
                )
    if len(rejections) == len(kinds):
        raise rejections[0]
    reports = merge_equivalent(reports)
    reports.sort(key=lambda r: r.sort_key())
    if unresolved:
        raise SolverIncomplete(f"{len(unresolved)} factor(s) of degree >= 3 left unresolved", (reports, unresolved))
    return reports


# -- equivalence of discrete components ---------------------------------------------------
#
# The polynomials of a discrete component are y_n(x) = P_n((x - g)/f).  Translating
# the equation by theta gives the same system with g - theta; the reflection
# x -> -x, sigma -> sigma(-x) + tau(-x), tau -> -tau(-x) gives it with (-f, -g).


def _translate(vec: tuple, theta) -> tuple:
    a, b, c, d, e, f, g, *rest = vec
    sig = sp.expand(a * (X + theta) ** 2 + b * (X + theta) + c)
    return (
        a,
        canonical(sig.coeff(X, 1)),
        canonical(sig.coeff(X, 0)),
        d,
        canonical(d * theta + e),
        f,
        canonical(g - theta),
        *rest,
    )


def _reflect(vec: tuple) -> tuple:
    a, b, c, d, e, f, g, *rest = vec
    # sigma(-x) + tau(-x) = a x^2 - (b + d) x + (c + e); -tau(-x) = d x - e
    return (a, canonical(-(b + d)), canonical(c + e), d, canonical(-e), canonical(-f), canonical(-g), *rest)


def _translation_normal(vec: tuple) -> tuple:
    a, b, c, d, e, f, g, *_ = vec
    if d != 0:
        return _translate(vec, canonical(-e / d))
    if a != 0:
        return _translate(vec, canonical(-b / (2 * a)))
    if b != 0:
        return _translate(vec, canonical(-c / b))
    return vec


def _vector(report) -> tuple:
    # solved recurrence parameters ride along unchanged by translation and reflection
    return tuple(report.eq.coefficients) + (report.transform.f, report.transform.g) + tuple(v for _, v in report.solved)


def _same_image(v1: tuple, free1: tuple, v2: tuple, free2: tuple) -> bool:
    """Whether two parametrized vectors describe the same set (free unknowns matched up)."""
    if len(free1) != len(free2):
        return False
    if not free1:
        return all(canonical(x - y) == 0 for x, y in zip(v1, v2))
    dummies = [sp.Dummy(name) for name in free1]
    renamed = [sp.sympify(x).xreplace({sym(nm): dmy for nm, dmy in zip(free1, dummies)}) for x in v1]
    eqs = [sp.numer(sp.together(x - y)) for x, y in zip(renamed, v2)]
    eqs = [q for q in eqs if sp.expand(q) != 0]
    if not eqs:
        return True
    for sol in sp.solve(eqs, dummies, dict=True):
        if len(sol) == len(dummies) and all(canonical(q.xreplace(sol)) == 0 for q in eqs):
            return True
    return False


def _representative_key(report) -> tuple:
    f = canonical(report.transform.f)
    negative = bool(f.is_number and f < 0) or (not f.is_number and sp.Poly(sp.numer(f), *sorted(f.free_symbols, key=str)).LC() < 0)
    return (negative, sp.count_ops(f) + sp.count_ops(report.transform.g), report.sort_key())


def merge_equivalent(reports: list) -> list:
    """Collapse discrete reports that differ only by translation or reflection."""
    out = [r for r in reports if r.kind != "discrete"]
    classes: list[list] = []
    for r in sorted((r for r in reports if r.kind == "discrete"), key=lambda r: r.sort_key()):
        v = _translation_normal(_vector(r))
        vr = _translation_normal(_reflect(_vector(r)))
        for cls in classes:
            w = _translation_normal(_vector(cls[0]))
            if _same_image(v, r.free, w, cls[0].free) or _same_image(vr, r.free, w, cls[0].free):
                cls.append(r)
                break
        else:
            classes.append([r])
    for cls in classes:
        rep = min(cls, key=_representative_key)
        out.append(dataclasses.replace(rep, equivalents=len(cls)))
    return out
