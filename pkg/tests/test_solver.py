import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from classicalop.algebra import QuadExtNum, poly_ring
from classicalop.errors import ResourceLimit
from classicalop.groebner import Budget, groebner_basis, reduces_to_zero
from classicalop.solver import solve_system

x, y = sp.symbols("x y")
d1, d2, d3, d5, d8, d9 = sp.symbols("d1 d2 d3 d5 d8 d9")


def basis(polys, order="lex", names=("x", "y")):
    R = poly_ring(names)
    return [g.as_expr() for g in groebner_basis([R.from_expr(p) for p in polys], order)]


# -- Groebner bases ----------------------------------------------------------------------

def test_groebner_lex():
    assert set(basis([x**2 - 1, x + y])) == {y**2 - 1, x + y}


def test_groebner_monomial():
    assert basis([x*y]) == [x*y]


def test_groebner_inconsistent():
    assert basis([x - 1, x - 2]) == [1]


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=4),
       st.lists(st.tuples(st.integers(-3, 3), st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=4))
def test_groebner_generators_reduce_to_zero(t1, t2):
    R = poly_ring(("x", "y"))
    polys = [R.from_expr(sum(c*x**i*y**j for c, i, j in t)) for t in (t1, t2)]
    polys = [p for p in polys if p]
    if not polys:
        return
    G = groebner_basis(polys, "degrevlex", Budget(5000))
    assert all(reduces_to_zero(p, G) for p in polys)
    # agrees with sympy's reference implementation
    ref = sp.groebner([p.as_expr() for p in polys], x, y, order="grevlex")
    monic = {sp.expand(g / sp.LC(g, x, y, order="grevlex")) for g in ref.exprs}
    assert {g.as_expr() for g in G} == monic


def test_groebner_budget():
    R = poly_ring(("x", "y"))
    system = [R.from_expr(x**3 - y**2 + x*y - 1), R.from_expr(y**3 - x**2*y + 2)]
    with pytest.raises(ResourceLimit):
        groebner_basis(system, "lex", Budget(2))


# -- triangular decomposition ------------------------------------------------------------

def test_product_splits_into_two_lines():
    comps = list(solve_system([x*y], ["x", "y"]))
    assert len(comps) == 2
    assert {(tuple(c.as_dict().items()), c.free) for c in comps} == {((("x", 0),), ("y",)), ((("y", 0),), ("x",))}


def test_quadratic_gives_conjugate_roots():
    comps = list(solve_system([y**2 - 2], ["y"]))
    values = {c.value("y") for c in comps}
    assert values == {QuadExtNum.make(0, 1, 2), QuadExtNum.make(0, -1, 2)}
    assert all(c.is_algebraic for c in comps)


def test_inconsistent_system_is_empty():
    assert len(solve_system([x - 1, x - 2], ["x"])) == 0


def test_worked_subsystem_forces_c_equals_minus_4a():
    # the five conditions of the first worked example in the d_i coordinates; d1 is a
    # nonzero multiple of a and d8 the matching multiple of c
    system = [
        4*d1*(4*d1 + d8),
        23*d1*d5 - 28*d1*d2 + 12*d1**2 - 8*d2*d5 + d5**2,
        92*d1**2 - 96*d1*d2 + 24*d1*d5 + 5*d2*d9 - 20*d1*d9 + 20*d1*d8 + d3**2,
        92*d1*d2 - 56*d1**2 - 48*d1*d5 + 8*d2*d5 - 6*d2*d9 + d5*d9 + 12*d1*d9 - 8*d1*d8,
        -8*d1*(8*d1 - 4*d2 - d9 + 2*d8),
    ]
    ts = solve_system(system, ["d8", "d9", "d3", "d5", "d2", "d1"], nonzero=[d1])
    assert ts.complete and len(ts) > 0
    for comp in ts:
        assert sp.simplify(comp.substitute(d8 + 4*d1)) == 0
        for eq in system:
            assert sp.simplify(comp.substitute(eq)) == 0
    # the real components: d3 in {0, +-2 d1}
    real = [c for c in ts if not c.is_algebraic and not any(sp.sympify(v).has(sp.I) for _, v in c.assignment)]
    assert {sp.cancel(c.substitute(d3/d1)) for c in real} == {0, 2, -2}


def test_parametric_coefficients():
    a = sp.Symbol("a")
    comps = list(solve_system([a*x - 1], ["x"], params=["a"]))
    assert len(comps) == 1
    assert sp.cancel(comps[0].value("x") - 1/a) == 0


def test_budget_exhaustion():
    system = [x**3 - y**2 + x*y - 1, y**3 - x**2*y + 2]
    with pytest.raises(ResourceLimit):
        solve_system(system, ["x", "y"], budget=1)


@settings(max_examples=25, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(1, 3))
def test_back_substitution_holds(p, q, m):
    system = [(x - p)*(y - q), x**m - p**m]
    for comp in solve_system(system, ["x", "y"]):
        for eq in system:
            assert sp.simplify(comp.substitute(eq)) == 0
