import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from classicalop.algebra import RatFuncN
from classicalop.errors import DegreeBoundExceeded, NoSolution, NotOrthogonalShape
from classicalop.exprio import EquationData, RecurrenceEq, parse_recurrence
from classicalop.inverse import (
    component_values, compute_shift, extract_monic, run_algorithm, solve_continuous,
)
from classicalop.relations import recurrence_from_relations, relations
from classicalop.standard import MONIC, PRESETS

from support import alpha, forward_consistent, hermite, jacobi, laguerre, n, proportional, x

beta = sp.Symbol("beta")
EX1 = "(n+3)*p[n+2] - x*(n+2)*p[n+1] + (n+1)*p[n] = 0"
EX2 = "p[n+2] - (x-n-1)*p[n+1] + alpha*(n+1)^2*p[n] = 0"


# -- shift ---------------------------------------------------------------------------------

def test_shift_first_example_raw():
    assert compute_shift(RecurrenceEq(n + 2, -x*(n + 1), n)).N == 1


def test_shift_hermite():
    assert compute_shift(RecurrenceEq(1, -2*x, 2*(n + 1))).N == 0


def test_shift_vanishing_s():
    assert compute_shift(RecurrenceEq(1, -x, (n - 2)*x)).N == 3


def test_shift_soundness():
    raw = run_algorithm(RecurrenceEq(n + 2, -x*(n + 1), n), "continuous")
    by_hand = run_algorithm(parse_recurrence(EX1), "continuous")
    assert [r.eq.coefficients for r in raw] == [r.eq.coefficients for r in by_hand]
    for r, h in zip(raw, by_hand):
        assert (r.shift_N, h.shift_N) == (1, 0)
        assert r.kratio == h.kratio == RatFuncN((n + 1)/(n + 2))
        # k_(m+1)/k_m of P_m = p_(m-1)
        assert r.kratio_original == RatFuncN(n/(n + 1))


# -- monic extraction ------------------------------------------------------------------------

def test_monic_first_example():
    mf = extract_monic(parse_recurrence(EX1))
    assert (mf.A, mf.Btilde, mf.Ctilde) == (RatFuncN((n + 1)/(n + 2)), RatFuncN(0), RatFuncN(1))


def test_monic_hermite():
    mf = extract_monic(RecurrenceEq(1, -2*x, 2*(n + 1)))
    assert (mf.A, mf.Btilde, mf.Ctilde) == (RatFuncN(2), RatFuncN(0), RatFuncN(n/2))


@pytest.mark.parametrize("rec", [RecurrenceEq(1, -x**2, 1), RecurrenceEq(1, -x, x), RecurrenceEq(1, 1, 1)])
def test_shape_rejection(rec):
    with pytest.raises(NotOrthogonalShape):
        extract_monic(rec)


def test_degree_bound():
    with pytest.raises(DegreeBoundExceeded):
        extract_monic(RecurrenceEq(1, -x, n**5 + 1))


def test_degree_bound_is_wider_for_discrete():
    # C~ of degree 5 passes the discrete pre-check
    mf = extract_monic(RecurrenceEq(1, -x, n**5 + 1), "discrete")
    assert mf.Ctilde.num_degree() == 5


# -- solving ------------------------------------------------------------------------------------

def test_first_example_solution_set():
    mf = extract_monic(parse_recurrence(EX1))
    points = set()
    for sol in solve_continuous(mf):
        for comp in sol.system:
            v = component_values(sol, comp)
            assert v["b"] == 0 and v["c"] == -4*v["a"]
            points.add((v["d"]/v["a"], v["e"]/v["a"]))
    assert points == {(1, 0), (2, 2), (2, -2), (3, 0)}


def test_second_example_unknown_alpha():
    rec = parse_recurrence(EX2, [("alpha", "unknown")])
    sols = solve_continuous(extract_monic(compute_shift(rec).shifted), ["alpha"])
    comps = [(s, c) for s in sols for c in s.system]
    assert len(comps) == 1
    v = component_values(*comps[0])
    assert v["alpha"] == sp.Rational(1, 4)
    assert (v["a"], v["e"]) == (0, 0)
    assert v["b"] == 2*v["c"] and v["d"] == -4*v["c"]


def test_pole_at_zero_has_no_solution():
    mf = extract_monic(parse_recurrence("(n+1)*p[n+2] - ((n+1)*x - 1)*p[n+1] + (n+1)*p[n] = 0"))
    assert mf.Btilde == RatFuncN(-1/n)
    with pytest.raises(NoSolution):
        solve_continuous(mf)
    assert run_algorithm(parse_recurrence("(n+1)*p[n+2] - ((n+1)*x - 1)*p[n+1] + (n+1)*p[n] = 0"), "continuous") == []


def test_linear_ctilde_is_probabilists_hermite():
    # replacing C~ = 1 by C~ = n in the first example gives He_(n+1) = x He_n - n He_(n-1)
    reports = run_algorithm(parse_recurrence("(n+3)*p[n+2] - x*(n+2)*p[n+1] + (n+1)^2*p[n] = 0"), "continuous")
    assert [r.family for r in reports] == ["Hermite"]
    assert proportional(reports[0].eq.coefficients, (0, 0, 1, -1, 0))


def test_power_case_gives_the_pencil():
    reports = run_algorithm(parse_recurrence("p[n+2] - x*p[n+1] = 0"), "continuous")
    a = sp.Symbol("a")
    shapes = {r.eq.coefficients for r in reports}
    assert shapes == {(0, 0, 0, 1, 0), (1, 0, 0, 0, 0), (a, 0, 0, 1, 0)}
    assert all(r.family in ("powers", "powers-σ=x²") for r in reports)


def test_third_example_parametric_component():
    rec = parse_recurrence(EX2, [("alpha", "unknown")])
    reports = run_algorithm(rec, "discrete")
    assert len(reports) == 1
    r = reports[0]
    b, e = sp.symbols("b e")
    assert set(r.free) == {"b", "e"}
    # normalization d = 1 of the rational representation with d, e free
    assert r.eq.coefficients == (0, b, sp.expand(-b*(-e + 1 + b)), 1, e)
    assert sp.cancel(r.transform.f - (-(1 + 2*b))) == 0 and r.transform.g == -e
    assert sp.cancel(dict(r.solved)["alpha"] - b*(1 + b)/(1 + 2*b)**2) == 0


def test_third_example_instantiated():
    # alpha = 3/16 makes 1 - 4 alpha = 1/4 a square
    reports = run_algorithm(parse_recurrence(EX2.replace("alpha", "3/16")), "discrete")
    assert {r.family for r in reports} <= {"Meixner", "Krawchouk"} and reports


def test_k_family_recurrence():
    rec = parse_recurrence("p[n+2] - (alpha*n + x*alpha + alpha + beta)*p[n+1] - (1+n)*alpha*p[n] = 0",
                           [("alpha", "fixed"), ("beta", "fixed")])
    reports = run_algorithm(rec, "discrete")
    assert [r.family for r in reports] == ["K"]
    r = reports[0]
    # the translation freedom e: pick e = beta/alpha to land on the identity transform
    e = sp.Symbol("e")
    pick = {e: beta/alpha}
    assert sp.cancel(r.transform.g.xreplace(pick)) == 0 and r.transform.f == 1
    assert proportional([v.xreplace(pick) for v in r.eq.coefficients], (0, 0, 1, alpha, beta))


def test_reserved_parameter_names():
    with pytest.raises(ValueError):
        run_algorithm(parse_recurrence("p[n+2] - x*p[n+1] + b*p[n] = 0", ["b"]))


# -- documented boundary behaviour ------------------------------------------------------------

def test_legendre_preset_with_bessel_leaves_no_solution():
    # kratio (2n+1)/(n+1) puts a pole of C at n = 0; with C~_0 != 0 this forces a shift
    rec = recurrence_from_relations(relations(EquationData.of((1, 0, 0, 3, 2)), PRESETS["legendre"]))
    assert compute_shift(rec).N == 1
    assert run_algorithm(rec, "continuous") == []


def test_bessel_zero_is_reported_twice():
    # with alpha = 0, B~ vanishes and x -> -x gives a second equation for the same polynomials
    rec = recurrence_from_relations(relations(EquationData.of((1, 0, 0, 2, 2)), MONIC))
    reports = run_algorithm(rec, "continuous")
    assert len(reports) == 2
    for target in ((1, 0, 0, 2, 2), (1, 0, 0, 2, -2)):
        assert any(proportional(r.eq.coefficients, target) for r in reports)


def test_same_family_round_trips_with_monic():
    rec = recurrence_from_relations(relations(EquationData.of((1, 0, 0, 3, 2)), MONIC))
    assert [r.family for r in run_algorithm(rec, "continuous")] == ["Bessel"]


# -- properties ---------------------------------------------------------------------------------

fr = st.fractions(-3, 3, max_denominator=3)


@settings(max_examples=10, deadline=None)
@given(st.fractions(0, 3, max_denominator=2), st.fractions(0, 3, max_denominator=2),
       fr.filter(lambda v: v != 0), fr)
def test_affine_change_of_variable_is_detected(al, be, s, t):
    # P_n(s x + t) for Jacobi(al, be) satisfies a classical equation again
    al, be = (sp.Rational(v.numerator, v.denominator) for v in (al, be))
    s, t = (sp.Rational(v.numerator, v.denominator) for v in (s, t))
    eq = jacobi(al, be)
    # sigma(s x + t)/s^2, tau(s x + t)/s
    sig = sp.expand(eq.sigma(s*x + t)/s**2)
    tau = sp.expand(eq.tau(s*x + t)/s)
    moved = EquationData.of((sig.coeff(x, 2), sig.coeff(x, 1), sig.coeff(x, 0), tau.coeff(x, 1), tau.coeff(x, 0)))
    rec = recurrence_from_relations(relations(moved, MONIC))
    reports = run_algorithm(rec, "continuous")
    assert any(proportional(r.eq.coefficients, moved.coefficients) for r in reports)
    assert all(forward_consistent(r, rec) for r in reports)


@settings(max_examples=10, deadline=None)
@given(st.fractions(-1, 4, max_denominator=3).filter(lambda v: v > -1))
def test_laguerre_round_trip(al):
    al = sp.Rational(al.numerator, al.denominator)
    rec = recurrence_from_relations(relations(laguerre(al), MONIC))
    reports = run_algorithm(rec, "continuous")
    assert [r.family for r in reports] == ["Laguerre"]
    assert proportional(reports[0].eq.coefficients, laguerre(al).coefficients)


def test_hermite_round_trip_with_preset():
    rec = recurrence_from_relations(relations(hermite(), PRESETS["hermite"]))
    reports = run_algorithm(rec, "continuous")
    assert [r.family for r in reports] == ["Hermite"] and reports[0].kratio == 2
