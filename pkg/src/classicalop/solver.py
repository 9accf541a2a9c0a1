"""Polynomial system solver producing a triangular decomposition.

Strategy, applied recursively on each branch:

1. factor every equation; factors free of unknowns are assumed nonzero
   (recorded as side conditions), factors known to be nonzero are dropped;
2. eliminate an unknown occurring linearly with a unit coefficient;
3. split on a reducible equation (branch i sets factor i to zero and keeps the
   earlier factors nonzero, so the branches are disjoint);
4. eliminate an unknown occurring linearly with a non-unit coefficient, splitting
   on whether that coefficient vanishes;
5. solve a single remaining quadratic with a quadratic extension number;
6. otherwise fall back to a lex Groebner basis over Q(params).

Every emitted component is back-substituted into the original system.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import sympy as sp
from sympy import QQ
from sympy.polys.fields import FracElement
from sympy.polys.rings import PolyElement, PolyRing

from .algebra import QuadExtNum, canonical, eval_rational, poly_ring, sym
from .errors import ClassicalOPError
from .groebner import Budget, groebner_basis


@dataclass(frozen=True)
class Component:
    """One piece of the solution set.

    ``assignment`` maps solved unknowns to expressions in the free unknowns and
    the parameters (or to QuadExtNum values).  ``triangular`` holds defining
    polynomials when the piece has no rational parametrization.
    """

    assignment: tuple[tuple[str, object], ...]
    free: tuple[str, ...] = ()
    side_conditions: tuple[sp.Expr, ...] = ()
    triangular: tuple[sp.Expr, ...] = ()

    def as_dict(self) -> dict:
        return dict(self.assignment)

    def value(self, name: str):
        d = dict(self.assignment)
        if name in d:
            return d[name]
        return sym(name)

    @property
    def is_point(self) -> bool:
        return not self.free and not self.triangular

    @property
    def is_algebraic(self) -> bool:
        return any(isinstance(v, QuadExtNum) and not v.is_rational for _, v in self.assignment)

    def substitute(self, expr) -> sp.Expr:
        """Evaluate an expression in the unknowns on this component (rational components only)."""
        mapping = {sym(k): (v.as_expr() if isinstance(v, QuadExtNum) else v) for k, v in self.assignment}
        out = sp.sympify(expr).xreplace(mapping)
        return sp.radsimp(canonical(out)) if self.is_algebraic else canonical(out)

    def key(self) -> tuple:
        return (
            tuple((k, sp.srepr(v.as_expr() if isinstance(v, QuadExtNum) else v)) for k, v in self.assignment),
            self.free,
            tuple(sp.srepr(t) for t in self.triangular),
        )

    def __str__(self):
        parts = [f"{k} = {v}" for k, v in self.assignment]
        if self.free:
            parts.append("free: " + ", ".join(self.free))
        if self.triangular:
            parts.append("with " + ", ".join(f"{t} = 0" for t in self.triangular))
        return "{" + "; ".join(parts) + "}"


@dataclass(frozen=True)
class Unresolved:
    variable: str
    polynomial: sp.Expr
    assignment: tuple[tuple[str, object], ...] = ()


@dataclass(frozen=True)
class TriangularSystem:
    components: tuple[Component, ...]
    unresolved: tuple[Unresolved, ...] = ()
    unknowns: tuple[str, ...] = ()

    @property
    def complete(self) -> bool:
        return not self.unresolved

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)


class BackSubstitutionFailure(ClassicalOPError):
    """A component failed the mandatory back-substitution check (internal bug)."""


@dataclass
class _State:
    eqs: list
    nonzero: list
    assign: dict
    free: list
    side: set = field(default_factory=set)
    gb_done: bool = False


class _Solver:
    def __init__(self, system, unknowns, params, nonzero, budget: Budget):
        self.unknowns = list(unknowns)
        self.params = list(params)
        names = tuple(self.params) + tuple(self.unknowns)
        if len(set(names)) != len(names):
            raise ValueError("parameters and unknowns must be distinct")
        self.R: PolyRing = poly_ring(names)
        self.K = self.R.to_field()
        self.index = {name: i for i, name in enumerate(names)}
        self.uidx = [self.index[u] for u in self.unknowns]
        self.budget = budget
        self.original = [self._to_ring(p) for p in system]
        self.initial_nonzero = [self._to_ring(z) for z in nonzero]
        self.components: list[Component] = []
        self.unresolved: list[Unresolved] = []

    # -- conversions -------------------------------------------------------
    def _to_ring(self, p) -> PolyElement:
        if isinstance(p, PolyElement) and p.ring == self.R:
            return p
        expr = p.as_expr() if isinstance(p, PolyElement) else sp.sympify(p)
        num, den = sp.fraction(sp.cancel(sp.together(expr)))
        if den.free_symbols & {sym(u) for u in self.unknowns}:
            raise ValueError("system entries must be polynomial in the unknowns")
        return self.R.from_expr(sp.expand(num))

    def _unknown_vars(self, p: PolyElement) -> list[int]:
        return [i for i in self.uidx if p.degree(i) > 0]

    def _has_unknown(self, p: PolyElement) -> bool:
        return any(p.degree(i) > 0 for i in self.uidx)

    def _factors(self, p: PolyElement, side: set) -> list[PolyElement]:
        """Distinct monic irreducible factors of p that involve unknowns."""
        _, facs = p.factor_list()
        out = []
        for f, _k in facs:
            if self._has_unknown(f):
                f = f.monic()
                if f not in out:
                    out.append(f)
            elif not f.is_ground:
                side.add(f.monic())
        return out

    def _subst(self, p: PolyElement, vi: int, num: PolyElement, den: PolyElement) -> tuple[PolyElement, int]:
        d = p.degree(vi)
        if d <= 0:
            return p, 0
        vg = self.R.gens[vi]
        out = self.R.zero
        for k in range(d + 1):
            ck = p.coeff_wrt(vg, k)
            if ck:
                # PolyElement refuses 0**0
                out += ck * (num**k if k else self.R.one) * den ** (d - k)
        return out, d

    def _subst_frac(self, val: FracElement, vi: int, num: PolyElement, den: PolyElement) -> FracElement:
        a, da = self._subst(val.numer, vi, num, den)
        b, db = self._subst(val.denom, vi, num, den)
        if db >= da:
            return self.K.new(a * den ** (db - da), b)
        return self.K.new(a, b * den ** (da - db))

    # -- main recursion ------------------------------------------------------
    def run(self) -> TriangularSystem:
        side: set = set()
        nonzero: list = []
        for z in self.initial_nonzero:
            if not z:
                return TriangularSystem((), (), tuple(self.unknowns))
            for f in self._factors(z, side):
                if f not in nonzero:
                    nonzero.append(f)
        state = _State(list(self.original), nonzero, {}, list(self.unknowns), side)
        self._step(state)
        comps: dict = {}
        for c in self.components:
            comps.setdefault(c.key(), c)
        ordered = sorted(comps.values(), key=lambda c: (len(c.free), str(c)))
        return TriangularSystem(tuple(ordered), tuple(self.unresolved), tuple(self.unknowns))

    def _normalize(self, st: _State) -> list[tuple] | None:
        eqs: list[tuple] = []
        for p in st.eqs:
            if not p:
                continue
            facs = [f for f in self._factors(p, st.side) if f not in st.nonzero]
            if not facs:
                return None
            t = tuple(sorted(facs, key=str))
            if t not in eqs:
                eqs.append(t)
        # drop equations implied by a sub-product equation
        keep = []
        for E in eqs:
            if any(F != E and set(F) <= set(E) for F in eqs):
                continue
            keep.append(E)
        return keep

    def _step(self, st: _State) -> None:
        self.budget.spend("solver step")
        eqs = self._normalize(st)
        if eqs is None:
            return
        if not eqs:
            self._emit(st)
            return
        prio = {i: k for k, i in enumerate(self.uidx)}
        free_idx = [self.index[u] for u in st.free]

        # linear with unit coefficient
        best = None
        for E in eqs:
            if len(E) != 1:
                continue
            f = E[0]
            for vi in free_idx:
                if f.degree(vi) == 1:
                    lc = f.coeff_wrt(self.R.gens[vi], 1)
                    if not self._has_unknown(lc):
                        cand = (prio[vi], len(f), str(f))
                        if best is None or cand < best[0]:
                            best = (cand, f, vi, lc)
        if best is not None:
            _, f, vi, lc = best
            rest = f - lc * self.R.gens[vi]
            if not lc.is_ground:
                st.side.add(lc.monic())
            self._eliminate(st, self._flatten(eqs, f), vi, -rest, lc)
            return

        # split on a reducible equation
        multi = [E for E in eqs if len(E) > 1]
        if multi:
            E = min(multi, key=lambda E: (len(E), sum(len(g) for g in E), str(E)))
            rest = [self._product(F) for F in eqs if F != E]
            for i, g in enumerate(E):
                self._step(
                    _State(rest + [g], st.nonzero + list(E[:i]), dict(st.assign), list(st.free), set(st.side), st.gb_done)
                )
            return

        # linear with a coefficient that involves unknowns
        lin = None
        for E in eqs:
            f = E[0]
            for vi in free_idx:
                if f.degree(vi) == 1:
                    lc = f.coeff_wrt(self.R.gens[vi], 1)
                    cand = (len(lc), prio[vi], len(f), str(f))
                    if lin is None or cand < lin[0]:
                        lin = (cand, f, vi, lc)
        if lin is not None:
            _, f, vi, lc = lin
            rest = f - lc * self.R.gens[vi]
            others = self._flatten(eqs, f)
            # coefficient nonzero: v = -rest/lc
            nz = list(st.nonzero)
            side = set(st.side)
            for g in self._factors(lc, side):
                if g not in nz:
                    nz.append(g)
            branch = _State(others, nz, dict(st.assign), list(st.free), side, st.gb_done)
            self._eliminate(branch, others, vi, -rest, lc)
            # coefficient zero: then rest must vanish as well
            self._step(_State(others + [lc, rest], list(st.nonzero), dict(st.assign), list(st.free), set(st.side), st.gb_done))
            return

        # a single remaining equation: quadratic or triangular description
        if len(eqs) == 1:
            self._finish_single(st, eqs[0][0])
            return

        if st.gb_done:
            self._emit(st, triangular=[E[0] for E in eqs])
            return
        self._groebner_step(st, [E[0] for E in eqs])

    @staticmethod
    def _product(E: tuple) -> PolyElement:
        out = E[0]
        for g in E[1:]:
            out = out * g
        return out

    def _flatten(self, eqs: list[tuple], drop: PolyElement) -> list[PolyElement]:
        return [self._product(E) for E in eqs if not (len(E) == 1 and E[0] == drop)]

    def _eliminate(self, st: _State, eqs: list[PolyElement], vi: int, num: PolyElement, den: PolyElement) -> None:
        name = self.R.symbols[vi].name
        new_eqs = [self._subst(p, vi, num, den)[0] for p in eqs]
        new_nz = []
        side = set(st.side)
        for z in st.nonzero:
            z2, _ = self._subst(z, vi, num, den)
            if not z2:
                return
            for g in self._factors(z2, side):
                if g not in new_nz:
                    new_nz.append(g)
        for g in self._factors(den, side) if self._has_unknown(den) else []:
            if g not in new_nz:
                new_nz.append(g)
        assign = {k: self._subst_frac(v, vi, num, den) for k, v in st.assign.items()}
        assign[name] = self.K.new(num, den)
        free = [u for u in st.free if u != name]
        self._step(_State(new_eqs, new_nz, assign, free, side, st.gb_done))

    def _finish_single(self, st: _State, f: PolyElement) -> None:
        vars_ = self._unknown_vars(f)
        prio = {i: k for k, i in enumerate(self.uidx)}
        quad = [vi for vi in vars_ if f.degree(vi) == 2]
        if not quad:
            if len(vars_) == 1:
                name = self.R.symbols[vars_[0]].name
                partial = tuple((k, v.as_expr()) for k, v in st.assign.items())
                self.unresolved.append(Unresolved(name, f.as_expr(), partial))
                return
            self._emit(st, triangular=[f])
            return
        vi = max(quad, key=lambda i: prio[i])
        vg = self.R.gens[vi]
        A, B, C = (f.coeff_wrt(vg, k) for k in (2, 1, 0))
        if self._has_unknown(A):
            # leading coefficient may vanish: handle that case separately
            side = set(st.side)
            self._step(_State([A, f], list(st.nonzero), dict(st.assign), list(st.free), side, st.gb_done))
            nz = list(st.nonzero)
            for g in self._factors(A, side):
                if g in nz:
                    continue
                nz.append(g)
            st = _State(st.eqs, nz, st.assign, st.free, side, st.gb_done)
        else:
            if not A.is_ground:
                st.side.add(A.monic())
        Ae, Be, Ce = A.as_expr(), B.as_expr(), C.as_expr()
        disc = canonical(Be**2 - 4 * Ae * Ce)
        name = self.R.symbols[vi].name
        for sign in (1, -1):
            root = QuadExtNum.make(-Be / (2 * Ae), sign / (2 * Ae), disc)
            self._emit(st, quad=(name, root))

    def _groebner_step(self, st: _State, polys: list[PolyElement]) -> None:
        free_syms = [u for u in self.unknowns if u in st.free]
        order = list(free_syms)  # highest priority is the largest variable in lex
        dom = QQ.frac_field(*[sym(p) for p in self.params]) if self.params else QQ
        R2 = PolyRing(tuple(order), dom)
        G = groebner_basis([R2.from_expr(p.as_expr()) for p in polys], order="lex", budget=self.budget)
        if G and G[0].is_ground:
            return
        back = []
        for g in G:
            num, _ = sp.fraction(sp.together(g.as_expr()))
            back.append(self._to_ring(sp.expand(num)))
        self._step(_State(back, list(st.nonzero), dict(st.assign), list(st.free), set(st.side), True))

    # -- output ----------------------------------------------------------------
    def _emit(self, st: _State, triangular=(), quad=None) -> None:
        values: dict = {}
        for u in self.unknowns:
            if u in st.assign:
                values[u] = st.assign[u].as_expr()
        free = [u for u in self.unknowns if u in st.free]
        if quad is not None:
            qname, root = quad
            free.remove(qname)
            qsym = sym(qname)
            values = {k: eval_rational(v, qsym, root) for k, v in values.items()}
            values[qname] = root
            ordered = [(u, values[u]) for u in self.unknowns if u in values]
        else:
            ordered = [(u, canonical(values[u])) for u in self.unknowns if u in values]
        # nonzero constraints: discard if violated, otherwise report
        conditions = []
        for z in st.nonzero:
            val = self._evaluate(z.as_expr(), dict(ordered))
            if _is_zero_value(val):
                return
            conditions.append(z.as_expr())
        conditions.extend(s.as_expr() for s in st.side)
        for _, v in ordered:
            if isinstance(v, QuadExtNum):
                continue
            den = sp.fraction(v)[1]
            if den.free_symbols:
                conditions.extend(f for f, _ in sp.factor_list(den)[1])
        conds = []
        for c in conditions:
            c = self._evaluate(c, dict(ordered))
            c = c.as_expr() if isinstance(c, QuadExtNum) else c
            c = sp.factor(c)
            if c.is_number:
                continue
            for f, _ in sp.factor_list(c)[1]:
                if f.free_symbols and f not in conds:
                    conds.append(f)
        comp = Component(
            tuple(ordered),
            tuple(free),
            tuple(sorted(conds, key=sp.default_sort_key)),
            tuple(t.as_expr() for t in triangular),
        )
        self._check(comp)
        self.components.append(comp)

    def _evaluate(self, expr, values: dict):
        expr = sp.sympify(expr)
        if any(isinstance(v, QuadExtNum) for v in values.values()):
            return _eval_quad(expr, values)
        return canonical(expr.xreplace({sym(k): v for k, v in values.items()}))

    def _check(self, comp: Component) -> None:
        values = comp.as_dict()
        basis = None
        if comp.triangular:
            dom = QQ.frac_field(*[sym(p) for p in self.params]) if self.params else QQ
            names = tuple(u for u in self.unknowns if u not in values)
            R2 = PolyRing(names, dom)
            basis = groebner_basis([R2.from_expr(sp.expand(t)) for t in comp.triangular], order="lex", budget=Budget(None))
        for p in self.original:
            val = self._evaluate(p.as_expr(), values)
            if basis is not None:
                num = sp.fraction(sp.together(val))[0]
                if sp.expand(num) != 0 and basis[0].ring.from_expr(sp.expand(num)).rem(basis):
                    raise BackSubstitutionFailure(f"component {comp} does not satisfy {p.as_expr()}")
            elif not _is_zero_value(val):
                raise BackSubstitutionFailure(f"component {comp} does not satisfy {p.as_expr()}")


def _is_zero_value(v) -> bool:
    if isinstance(v, QuadExtNum):
        return v.is_zero()
    return canonical(v) == 0


def _eval_quad(expr: sp.Expr, values: dict):
    """Evaluate a polynomial expression at a point with QuadExtNum coordinates."""
    expr = sp.expand(expr)
    syms = sorted(expr.free_symbols, key=lambda s: s.name)
    if not syms:
        return QuadExtNum.lift(expr)
    poly = sp.Poly(expr, *syms)
    total = QuadExtNum.lift(0)
    for monom, coeff in poly.terms():
        term = QuadExtNum.lift(coeff)
        for s, e in zip(syms, monom):
            if e:
                v = values.get(s.name, s)
                term = term * (QuadExtNum.lift(v) ** e if not isinstance(v, QuadExtNum) else v**e)
        total = total + term
    return total


def solve_system(system, unknowns, params=(), nonzero=(), budget: Budget | int | None = None) -> TriangularSystem:
    """Decompose the zero set of ``system`` (polynomials in params and unknowns).

    ``unknowns`` is ordered by elimination priority: earlier unknowns are solved
    for first, later ones tend to stay free.  ``nonzero`` lists expressions that
    must not vanish on a component (handled by saturation).  Parameters live in
    the coefficient field and are assumed generic.
    """
    if not isinstance(budget, Budget):
        budget = Budget(budget if budget is not None else 20000)
    unknowns = [str(u) for u in unknowns]
    params = [str(p) for p in params]
    return _Solver(system, unknowns, params, nonzero, budget).run()
