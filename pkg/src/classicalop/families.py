"""Map equation data to the normal forms of the classical families.

Continuous equations are normalized by an affine change x = kappa*z + theta
followed by a projective rescaling.  Difference equations are only invariant
under integer translations and the reflection x -> -x, so the discrete normal
forms are reached by translation (absorbed into the affine transform g) and,
when sigma vanishes, by reflection.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import sympy as sp

from .algebra import N as NSYM
from .algebra import X, RatFuncN, canonical, square_split, sym
from .exprio import EquationData

Z = sp.Symbol("z")
OO = sp.oo


# -- report types --------------------------------------------------------------------


@dataclass(frozen=True)
class Admissibility:
    real_weight_exists: bool | None
    lambda_nonzero: bool | None
    parameter_conditions: tuple[str, ...] = ()


@dataclass(frozen=True)
class Support:
    """An interval [lo, hi] (continuous) or an integer range lo..hi (discrete); empty kind means none."""

    kind: str = "none"
    lo: sp.Expr | None = None
    hi: sp.Expr | None = None
    note: str = ""

    def __str__(self):
        if self.kind == "interval":
            left = "(" if self.lo == -OO else "["
            right = ")" if self.hi == OO else "]"
            return f"{left}{_fmt(self.lo)}, {_fmt(self.hi)}{right}"
        if self.kind == "integers":
            if self.hi == OO:
                return f"{{{_fmt(self.lo)}, {_fmt(self.lo + 1)}, ...}}"
            return f"{{{_fmt(self.lo)}, ..., {_fmt(self.hi)}}}"
        return self.note or "none"


@dataclass(frozen=True)
class DensityExpr:
    """Weight up to a positive constant.

    Continuous: prod(base_i^exp_i) * exp(exponent), each base linear in x.
    Discrete: the ratio rho(x+1)/rho(x) and, when recognized, a closed form.
    """

    kind: str
    factors: tuple[tuple[sp.Expr, sp.Expr], ...] = ()
    exponent: sp.Expr = sp.Integer(0)
    ratio: sp.Expr | None = None
    closed_form: sp.Expr | None = None
    note: str = ""

    @property
    def expr(self) -> sp.Expr | None:
        if self.kind == "continuous":
            out = sp.exp(self.exponent)
            for base, p in self.factors:
                out *= base**p
            return out
        return self.closed_form

    def pearson_holds(self, sigma: sp.Expr, tau: sp.Expr, x=X) -> bool:
        """(sigma rho)' = tau rho, resp. rho(x+1)/rho(x) = (sigma + tau)(x)/sigma(x+1)."""
        if self.kind == "continuous":
            logd = sp.diff(self.exponent, x) + sum(p * sp.diff(base, x) / base for base, p in self.factors)
            return canonical(sigma * logd + sp.diff(sigma, x) - tau) == 0
        if self.ratio is None:
            return False
        target = canonical((sigma + tau) / sigma.subs(x, x + 1))
        if canonical(self.ratio - target) != 0:
            return False
        if self.closed_form is None:
            return True
        shifted = shift_ratio(self.closed_form, x)
        return shifted is not None and canonical(shifted - target) == 0

    def __str__(self):
        if self.kind == "continuous":
            if not self.factors and self.exponent == 0:
                return self.note or "1"
            return _fmt(self.expr)
        parts = []
        if self.closed_form is not None:
            parts.append(_fmt(self.closed_form))
        if self.ratio is not None:
            parts.append(f"rho(x+1)/rho(x) = {_fmt(sp.factor(self.ratio))}")
        if self.note:
            parts.append(self.note)
        return "; ".join(parts) if parts else "none"


def _unit_step(u, x) -> int | None:
    u = sp.expand(u)
    if x not in u.free_symbols or sp.Poly(u, x).degree() != 1:
        return None
    step = u.coeff(x, 1)
    return int(step) if step in (1, -1) else None


def shift_ratio(expr: sp.Expr, x=X) -> sp.Expr | None:
    """expr(x+1)/expr(x) for products of gamma, rising factorial, factorial, binomial and power factors.

    Arguments must move by +-1 when x does; returns None for anything else.
    """
    out = sp.Integer(1)
    for factor in sp.Mul.make_args(expr):
        if x not in factor.free_symbols:
            continue
        base, k = factor.as_base_exp()
        if x not in base.free_symbols:
            kk = sp.expand(k)
            if sp.Poly(kk, x).degree() != 1:
                return None
            out *= base ** kk.coeff(x, 1)
            continue
        if not k.is_Integer:
            return None
        if isinstance(base, (sp.gamma, sp.factorial)):
            u = base.args[0] + (1 if isinstance(base, sp.factorial) else 0)
            step = _unit_step(u, x)
            if step is None:
                return None
            r = u if step == 1 else 1 / (u - 1)
        elif isinstance(base, sp.RisingFactorial):
            c, u = base.args
            if x in c.free_symbols or _unit_step(u, x) != 1:
                return None
            r = c + u
        elif isinstance(base, sp.binomial):
            top, u = base.args
            if x in top.free_symbols or _unit_step(u, x) != 1:
                return None
            r = (top - u) / (u + 1)
        else:
            return None
        out *= r**k
    return canonical(out)


@dataclass(frozen=True)
class NormalizingMap:
    """x = kappa*z + theta carries the normal form (variable z) to the given equation.

    For difference equations kappa is +1 or -1 (reflection); ``scale`` is the
    projective factor applied to (sigma, tau) after the substitution.
    """

    kappa: sp.Expr = sp.Integer(1)
    theta: sp.Expr = sp.Integer(0)
    scale: sp.Expr = sp.Integer(1)


def transform_equation(eq: EquationData, m: NormalizingMap) -> EquationData:
    """Equation data in the variable z where x = kappa*z + theta, multiplied by ``scale``."""
    x_of_z = m.kappa * Z + m.theta
    if eq.kind == "continuous":
        sig = eq.sigma(x_of_z) / m.kappa**2
        tau = eq.tau(x_of_z) / m.kappa
    elif m.kappa == 1:
        sig, tau = eq.sigma(x_of_z), eq.tau(x_of_z)
    elif m.kappa == -1:
        sig = eq.sigma(x_of_z) + eq.tau(x_of_z)
        tau = -eq.tau(x_of_z)
    else:
        raise ValueError("difference equations only admit kappa = +1 or -1")
    sig = sp.Poly(sp.expand(m.scale * sig), Z)
    tau = sp.Poly(sp.expand(m.scale * tau), Z)
    coeff = lambda p, k: canonical(p.coeff_monomial(Z**k))  # noqa: E731
    return EquationData(coeff(sig, 2), coeff(sig, 1), coeff(sig, 0), coeff(tau, 1), coeff(tau, 0), eq.kind)


@dataclass(frozen=True)
class Classification:
    family: str
    parameters: tuple[tuple[str, sp.Expr], ...]
    density: DensityExpr
    support: Support
    admissible: Admissibility
    normal_map: NormalizingMap | None = None
    normal_form: EquationData | None = None


@dataclass(frozen=True)
class SolutionReport:
    branch: str
    eq: EquationData
    transform: object
    family: str
    parameters: tuple[tuple[str, sp.Expr], ...]
    density: DensityExpr
    support: Support
    kratio: RatFuncN | None
    admissible: Admissibility
    side_conditions: tuple[sp.Expr, ...] = ()
    unresolved: tuple[sp.Expr, ...] = ()
    free: tuple[str, ...] = ()
    kratio_original: RatFuncN | None = None
    shift_N: int = 0
    normal_map: NormalizingMap | None = None
    normal_form: EquationData | None = None
    equivalents: int = 1
    solved: tuple[tuple[str, sp.Expr], ...] = ()

    @property
    def kind(self) -> str:
        return self.eq.kind

    def parameter(self, name: str):
        return dict(self.parameters)[name]

    def sort_key(self) -> tuple:
        return (
            self.kind,
            self.branch,
            self.family,
            tuple(sp.srepr(v) for v in self.eq.coefficients),
            sp.srepr(self.transform.f),
            sp.srepr(self.transform.g),
        )


def _fmt(v) -> str:
    if v is None:
        return "none"
    if v == OO:
        return "oo"
    if v == -OO:
        return "-oo"
    return str(v).replace("**", "^")


def _sign(expr) -> int | None:
    """+1 / -1 / 0 for a numeric expression, None when it depends on symbols."""
    expr = canonical(expr)
    if expr.free_symbols:
        return None
    if expr == 0:
        return 0
    if expr.is_real is False:
        return None
    return 1 if expr > 0 else -1


def _gt(expr, bound) -> bool | None:
    s = _sign(canonical(expr - bound))
    return None if s is None else s > 0


def _all(*flags) -> bool | None:
    if any(f is False for f in flags):
        return False
    if any(f is None for f in flags):
        return None
    return True


def _lambda_ok(eq: EquationData) -> bool | None:
    expr = sp.expand(eq.a * (NSYM - 1) + eq.d)
    if expr == 0:
        return False
    if not eq.admissible:
        return False
    if eq.a != 0 and canonical(1 - eq.d / eq.a).free_symbols:
        return None
    return True


# -- continuous ------------------------------------------------------------------------


def _unresolved(eq: EquationData, note: str, real=False) -> Classification:
    ratio = None
    if eq.kind == "discrete" and canonical(eq.sigma(X + 1)) != 0:
        ratio = canonical((eq.sigma() + eq.tau()) / eq.sigma(X + 1))
    density = DensityExpr(eq.kind, ratio=ratio, note=note)
    return Classification("unresolved", (), density, Support(note=note), Admissibility(real, _lambda_ok(eq), (note,)))


def classify_continuous(eq: EquationData) -> Classification:
    """Family, parameters, weight and support of sigma y'' + tau y' + lambda_n y = 0."""
    a, b, c, d, e = eq.coefficients
    lam = _lambda_ok(eq)
    if a == 0 and b == 0 and c == 0:
        if d == 0:
            return _unresolved(eq, "sigma and tau are both constant")
        m = NormalizingMap(sp.Integer(1), canonical(-e / d), canonical(1 / d))
        return Classification(
            "powers", (), DensityExpr("continuous", note="none (sigma vanishes)"), Support(note="none"),
            Admissibility(False, lam, ("sigma = 0: x^n, no orthogonality",)), m, transform_equation(eq, m),
        )
    if a == 0 and b == 0:
        return _hermite(eq, lam)
    if a == 0:
        return _laguerre(eq, lam)
    disc = canonical(b**2 - 4 * a * c)
    if disc == 0:
        return _double_root(eq, lam)
    return _jacobi(eq, disc, lam)


def _hermite(eq: EquationData, lam) -> Classification:
    _, _, c, d, e = eq.coefficients
    if d == 0:
        return _unresolved(eq, "sigma constant and tau constant")
    theta = canonical(-e / d)
    kappa_sq = canonical(-2 * c / d)
    kappa = sp.sqrt(kappa_sq)
    m = NormalizingMap(canonical(kappa), theta, canonical(kappa_sq / c))
    density = DensityExpr("continuous", exponent=canonical(d / (2 * c)) * X**2 + canonical(e / c) * X)
    decays = _sign(d / c)
    real = None if decays is None else decays < 0
    conds = () if real is not None else (f"{_fmt(canonical(d / c))} < 0",)
    return Classification(
        "Hermite", (), density, Support("interval", -OO, OO), Admissibility(real, lam, conds), m, transform_equation(eq, m)
    )


def _laguerre(eq: EquationData, lam) -> Classification:
    _, b, c, d, e = eq.coefficients
    if d == 0:
        return _unresolved(eq, "tau constant with linear sigma")
    x0 = canonical(-c / b)
    alpha = canonical((d * x0 + e) / b - 1)
    kappa = canonical(-b / d)
    m = NormalizingMap(kappa, x0, canonical(kappa / b))
    direction = _sign(-d / b)
    if direction is not None and direction < 0:
        base, support = x0 - X, Support("interval", -OO, x0)
    else:
        base, support = X - x0, Support("interval", x0, OO)
    density = DensityExpr("continuous", ((canonical(base), alpha),) if alpha != 0 else (), canonical(d / b) * X)
    ok = _gt(alpha, -1)
    conds = ("alpha > -1",) if ok is None else ()
    if direction is None:
        conds += (f"support direction depends on the sign of {_fmt(canonical(-d / b))}",)
    return Classification(
        "Laguerre", (("alpha", alpha),), density, support, Admissibility(ok, lam, conds), m, transform_equation(eq, m)
    )


def _double_root(eq: EquationData, lam) -> Classification:
    a, b, _, d, e = eq.coefficients
    x0 = canonical(-b / (2 * a))
    shift = canonical(d * x0 + e)
    alpha = canonical(d / a - 2)
    base = canonical(X - x0)
    if shift == 0:
        m = NormalizingMap(sp.Integer(1), x0, canonical(1 / a))
        density = DensityExpr("continuous", ((base, alpha),) if alpha != 0 else ())
        return Classification(
            "powers-σ=x²", (("alpha", alpha),), density, Support(note="none"),
            Admissibility(False, lam, ("(x - x0)^n, no orthogonality",)), m, transform_equation(eq, m),
        )
    kappa = canonical(shift / (2 * a))
    m = NormalizingMap(kappa, x0, canonical(1 / a))
    density = DensityExpr("continuous", ((base, alpha),) if alpha != 0 else (), canonical(-shift / (a * base)))
    note = "no real weight on an interval; orthogonal on the unit circle"
    return Classification(
        "Bessel", (("alpha", alpha),), density, Support(note="unit circle (complex contour)"),
        Admissibility(False, lam, (note,)), m, transform_equation(eq, m),
    )


def _jacobi(eq: EquationData, disc, lam) -> Classification:
    a, b, _, d, e = eq.coefficients
    root_m, root_s = square_split(disc)
    s_sign = _sign(root_s)
    if s_sign is not None and s_sign < 0:
        return _unresolved(eq, "sigma has complex conjugate roots")
    sq = canonical(root_m * sp.sqrt(root_s))
    r1 = canonical((-b + sq) / (2 * a))
    r2 = canonical((-b - sq) / (2 * a))
    order = _sign(r1 - r2)
    if order is not None and order < 0:
        r1, r2 = r2, r1
    theta = canonical((r1 + r2) / 2)
    kappa = canonical((r1 - r2) / 2)
    spread = canonical((d * theta + e) / (a * kappa))
    total = canonical(d / a - 2)
    alpha = canonical(sp.radsimp((total + spread) / 2))
    beta = canonical(sp.radsimp((total - spread) / 2))
    m = NormalizingMap(kappa, theta, canonical(1 / a))
    factors = tuple((canonical(base), p) for base, p in ((r1 - X, alpha), (X - r2, beta)) if p != 0)
    density = DensityExpr("continuous", factors)
    ok = _all(_gt(alpha, -1), _gt(beta, -1))
    if s_sign is None:
        ok = None
    conds = ()
    if ok is None:
        conds = ("alpha > -1", "beta > -1") + (("sigma has real roots",) if s_sign is None else ())
    return Classification(
        "Jacobi", (("alpha", alpha), ("beta", beta)), density, Support("interval", r2, r1), Admissibility(ok, lam, conds), m,
        transform_equation(eq, m),
    )


# -- discrete ----------------------------------------------------------------------------


def _ratio(eq: EquationData):
    den = canonical(eq.sigma(X + 1))
    return canonical((eq.sigma() + eq.tau()) / den) if den != 0 else None


def classify_discrete(eq: EquationData) -> Classification:
    """Family, parameters and weight of sigma Delta nabla y + tau Delta y + lambda_n y = 0."""
    a, b, c, d, e = eq.coefficients
    if a == 0 and b == 0 and c == 0:
        if d == 0:
            return _unresolved(eq, "sigma and tau are both constant")
        # sigma = 0: reflect x -> -x, which turns (0, tau) into (tau(-z), -tau(-z))
        reflected = transform_equation(eq, NormalizingMap(sp.Integer(-1)))
        inner = classify_discrete(reflected)
        if inner.normal_map is None:
            return inner
        m = NormalizingMap(sp.Integer(-1), canonical(-inner.normal_map.theta), inner.normal_map.scale)
        density = DensityExpr("discrete", ratio=_ratio(eq), closed_form=None, note=f"reflection of: {inner.density}")
        return Classification(
            inner.family, inner.parameters, density, _reflect_support(inner.support), inner.admissible, m, transform_equation(eq, m)
        )
    lam = _lambda_ok(eq)
    if a == 0 and b == 0:
        return _kfamily(eq, lam)
    if a == 0:
        return _linear_sigma(eq, lam)
    return _hahn(eq, lam)


def _reflect_support(s: Support) -> Support:
    if s.kind != "integers":
        return s
    hi = -s.lo
    lo = -OO if s.hi == OO else -s.hi
    return Support("integers", lo, hi, "reflected")


def _closed(expr_in_z, theta) -> sp.Expr:
    return expr_in_z.subs(Z, X - theta)


def _kfamily(eq: EquationData, lam) -> Classification:
    _, _, c, d, e = eq.coefficients
    alpha, beta = canonical(d / c), canonical(e / c)
    m = NormalizingMap(sp.Integer(1), sp.Integer(0), canonical(1 / c))
    closed = None
    if alpha != 0:
        closed = alpha**X * sp.rf(canonical((1 + beta) / alpha), X)
    density = DensityExpr("discrete", ratio=_ratio(eq), closed_form=closed, note="not a weight on a real discrete set")
    return Classification(
        "K", (("alpha", alpha), ("beta", beta)), density, Support(note="none"),
        Admissibility(False, lam, ("sigma = 1: no positive discrete weight",)), m, transform_equation(eq, m),
    )


def _linear_sigma(eq: EquationData, lam) -> Classification:
    _, b, c, d, e = eq.coefficients
    y0 = canonical(-c / b)
    slope = canonical((b + d) / b)
    const = canonical((d * y0 + e) / b)
    m = NormalizingMap(sp.Integer(1), y0, canonical(1 / b))
    nf = transform_equation(eq, m)
    ratio = _ratio(eq)
    z = X - y0
    naturals = Support("integers", y0, OO)
    if slope == 0 and const == 0:
        density = DensityExpr("discrete", ratio=ratio, note="point mass at x = x0")
        return Classification(
            "falling-factorial", (), density, Support("integers", y0, y0), Admissibility(False, lam, ("falling factorials, no orthogonality",)), m, nf
        )
    if slope == 0:
        mu = const
        density = DensityExpr("discrete", ratio=ratio, closed_form=mu**z / sp.factorial(z))
        ok = _gt(mu, 0)
        return Classification(
            "Charlier", (("mu", mu),), density, naturals, Admissibility(ok, lam, ("mu > 0",) if ok is None else ()), m, nf
        )
    mu = slope
    gamma = canonical(const / slope)
    if _sign(mu) == -1:
        p = canonical(mu / (mu - 1))
        big_n = canonical(-gamma)
        closed = sp.binomial(big_n, z) * p**z * (1 - p) ** (big_n - z)
        density = DensityExpr("discrete", ratio=ratio, closed_form=closed)
        is_int = big_n.is_integer and big_n >= 0 if not big_n.free_symbols else None
        ok = _all(is_int, _gt(p, 0), _gt(1, p))
        conds = ("N a nonnegative integer",) if is_int is None else ()
        return Classification(
            "Krawchouk", (("p", p), ("N", big_n)), density, Support("integers", y0, canonical(y0 + big_n)), Admissibility(ok, lam, conds), m, nf
        )
    closed = sp.rf(gamma, z) * mu**z / sp.factorial(z)
    density = DensityExpr("discrete", ratio=ratio, closed_form=closed)
    ok = _all(_gt(gamma, 0), _gt(mu, 0), _gt(1, mu))
    conds = ("gamma > 0", "0 < mu < 1") if ok is None else ()
    return Classification("Meixner", (("gamma", gamma), ("mu", mu)), density, naturals, Admissibility(ok, lam, conds), m, nf)


def _roots(expr) -> list | None:
    """Both roots of a quadratic in X over the field, or None when irrational."""
    p = sp.Poly(sp.expand(expr), X)
    A, B, C = (canonical(p.coeff_monomial(X**k)) for k in (2, 1, 0))
    disc = canonical(B**2 - 4 * A * C)
    m, s = square_split(disc)
    if s not in (0, 1):
        return None
    return [canonical((-B + m) / (2 * A)), canonical((-B - m) / (2 * A))]


def _complexity(values) -> tuple:
    return (sum(sp.count_ops(v) for v in values), sum(len(str(v)) for v in values), str(values))


def _hahn(eq: EquationData, lam) -> Classification:
    a = eq.a
    sig_roots = _roots(eq.sigma())
    top_roots = _roots(eq.sigma() + eq.tau())
    if sig_roots is None or top_roots is None:
        return _unresolved(eq, "sigma or sigma + tau has irrational roots")
    candidates = []
    for i in range(2):
        r, r_other = sig_roots[i], sig_roots[1 - i]
        for j in range(2):
            s_top, s_low = top_roots[j], top_roots[1 - j]
            big_n = canonical(s_top - r + 1)
            alpha = canonical(r_other - r - big_n)
            beta = canonical(r - s_low - 1)
            candidates.append((_complexity((big_n, alpha, beta)), r, big_n, alpha, beta))
    candidates.sort(key=lambda t: t[0])
    _, y0, big_n, alpha, beta = candidates[0]
    m = NormalizingMap(sp.Integer(1), y0, canonical(-1 / a))
    z = X - y0
    closed = sp.gamma(big_n + alpha - z) * sp.gamma(beta + 1 + z) / (sp.gamma(z + 1) * sp.gamma(big_n - z))
    density = DensityExpr("discrete", ratio=_ratio(eq), closed_form=closed)
    is_int = (big_n.is_integer and big_n >= 1) if not big_n.free_symbols else None
    ok = _all(is_int, _gt(alpha, -1), _gt(beta, -1))
    conds = ("N a positive integer", "alpha > -1", "beta > -1") if ok is None else ()
    return Classification(
        "Hahn-1", (("alpha", alpha), ("beta", beta), ("N", big_n)), density, Support("integers", y0, canonical(y0 + big_n - 1)),
        Admissibility(ok, lam, conds), m, transform_equation(eq, m),
    )


# -- normal-form table --------------------------------------------------------------------


def normal_form(family: str, params: dict, kind: str) -> EquationData | None:
    """The table entry (a, b, c, d, e) for a family with the given parameters."""
    p = {k: sp.sympify(v) for k, v in params.items()}
    g = p.get
    if kind == "continuous":
        table = {
            "powers": (0, 0, 0, 1, 0),
            "Hermite": (0, 0, 1, -2, 0),
            "Laguerre": (0, 1, 0, -1, g("alpha", 0) + 1),
            "Bessel": (1, 0, 0, g("alpha", 0) + 2, 2),
            "powers-σ=x²": (1, 0, 0, g("alpha", -2) + 2, 0),
            "Jacobi": (1, 0, -1, g("alpha", 0) + g("beta", 0) + 2, g("alpha", 0) - g("beta", 0)),
        }
    else:
        al, be, nn, mu, ga, pp = (g(k, sym(k)) for k in ("alpha", "beta", "N", "mu", "gamma", "p"))
        table = {
            "K": (0, 0, 1, al, be),
            "falling-factorial": (0, 1, 0, -1, 0),
            "Charlier": (0, 1, 0, -1, mu),
            "Meixner": (0, 1, 0, mu - 1, mu * ga),
            "Krawchouk": (0, 1, 0, -pp / (1 - pp) - 1, pp / (1 - pp) * nn),
            "Hahn-1": None,
        }
    if family not in table:
        return None
    entry = table[family]
    if entry is None:
        # sigma = x(N + alpha - x), sigma + tau = (x + beta + 1)(N - 1 - x)
        sig = X * (nn + al - X)
        tau = sp.expand((X + be + 1) * (nn - 1 - X) - sig)
        tp = sp.Poly(tau, X)
        entry = (-1, nn + al, 0, tp.coeff_monomial(X), tp.coeff_monomial(1))
    return EquationData.of(entry, kind)


# -- reports --------------------------------------------------------------------------------


def classify(eq: EquationData) -> Classification:
    return classify_continuous(eq) if eq.kind == "continuous" else classify_discrete(eq)


def report_for_component(kind, sol, comp, kratio=None, kratio_original=None, shift_N=0) -> SolutionReport:
    """Classify one solver component and wrap it into a report."""
    from .inverse import AffineTransform, component_values

    values = component_values(sol, comp)
    eq = EquationData.of([values[k] for k in "abcde"], kind)
    transform = AffineTransform(canonical(values["f"]), canonical(values["g"])) if kind == "discrete" else AffineTransform()
    solved = tuple((k, canonical(v)) for k, v in values.items() if k not in ("a", "b", "c", "d", "e", "f", "g"))
    result = classify(eq)
    ratio = kratio
    if kind == "discrete" and kratio is not None:
        ratio = kratio / RatFuncN(transform.f)
        if kratio_original is not None:
            kratio_original = kratio_original / RatFuncN(transform.f)
    return SolutionReport(
        branch=sol.branch,
        eq=eq,
        transform=transform,
        family=result.family,
        parameters=result.parameters,
        density=result.density,
        support=result.support,
        kratio=ratio,
        admissible=result.admissible,
        side_conditions=tuple(comp.side_conditions),
        unresolved=tuple(comp.triangular),
        free=tuple(comp.free),
        kratio_original=kratio_original,
        shift_N=shift_N,
        normal_map=result.normal_map,
        normal_form=result.normal_form,
        solved=solved,
    )
