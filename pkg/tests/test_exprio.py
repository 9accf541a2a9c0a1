import json

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from classicalop.errors import ParseError, UnknownSymbol
from classicalop.exprio import (
    NO_SOLUTION_TEXT, EquationData, RecurrenceEq, format_poly, parse_polynomial, parse_recurrence, print_report,
)
from classicalop.inverse import run_algorithm

n, x, alpha = sp.symbols("n x alpha")

EX1 = "(n+3)*p[n+2] - x*(n+2)*p[n+1] + (n+1)*p[n] = 0"
EX2 = "p[n+2] - (x-n-1)*p[n+1] + alpha*(n+1)^2*p[n] = 0"


def same(u, v):
    return sp.expand(u - v) == 0


# -- parsing -----------------------------------------------------------------------------

def test_parse_first_worked_recurrence():
    rec = parse_recurrence(EX1)
    assert same(rec.q, n + 3) and same(rec.r, -x*(n + 2)) and same(rec.s, n + 1)


def test_parse_with_declared_parameter():
    rec = parse_recurrence(EX2, [("alpha", "unknown")])
    assert same(rec.q, 1) and same(rec.r, -(x - n - 1)) and same(rec.s, alpha*(n + 1)**2)
    assert rec.unknown_params == ("alpha",)


def test_parse_trivial():
    rec = parse_recurrence("p[n+2] + p[n] = 0")
    assert (rec.q, rec.r, rec.s) == (1, 0, 1)


def test_parse_other_sequence_name():
    assert parse_recurrence("P[n+2] - x*P[n+1] + P[n] = 0") == parse_recurrence("p[n+2] - x*p[n+1] + p[n] = 0")


def test_parse_collects_repeated_terms():
    rec = parse_recurrence("p[n+2] + x*p[n+1] - 2*p[n+1] + n*p[n] + p[n] = 0")
    assert same(rec.r, x - 2) and same(rec.s, n + 1)


def test_rational_literals_are_cleared():
    rec = parse_recurrence("p[n+2] + 3/2*p[n] = 0")
    assert (rec.q, rec.s) == (2, 3)


@pytest.mark.parametrize("text", [
    "p[n+2] + p[n]/x = 0",
    "p[n+2] + p[n]^(1/2) = 0",
    "p[n+2]*x^-1 = 0",
    "p[n+3] = 0",
    "p[n+2] + (x*p[n] = 0",
    "p[n+2] + 1 = 0",
    "p[n+1] + p[n] = 0",
    "p[n+2] + p[n] = 1",
    "p[n+2] + q[n] = 0",
])
def test_rejects_malformed(text):
    with pytest.raises(ParseError):
        parse_recurrence(text)


def test_error_position_and_expected_set():
    with pytest.raises(ParseError) as info:
        parse_recurrence("p[n+2] + (x*p[n] = 0")
    assert (info.value.line, info.value.column) == (1, 18)
    assert "')'" in info.value.expected


def test_undeclared_identifier():
    with pytest.raises(UnknownSymbol):
        parse_recurrence("p[n+2] + y*p[n] = 0")


def test_polynomial_parser():
    assert same(parse_polynomial("(x+1)^3 - 3/2*n*x"), (x + 1)**3 - sp.Rational(3, 2)*n*x)


# -- printing round trip -----------------------------------------------------------------

coeff = st.integers(-5, 5)
monomials = st.lists(st.tuples(coeff, st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=4)


def poly_of(terms, extra=1):
    return sum((c*n**i*x**j*extra for c, i, j in terms), sp.Integer(0))


@settings(max_examples=60, deadline=None)
@given(monomials, monomials, monomials, st.booleans())
def test_print_parse_round_trip(tq, tr, ts, with_param):
    q = poly_of(tq)
    if sp.expand(q) == 0:
        q = n + 1
    params = [("alpha", "fixed")] if with_param else []
    s = poly_of(ts, alpha if with_param else 1)
    rec = RecurrenceEq(q, poly_of(tr), s, params=params)
    again = parse_recurrence(rec.to_text(), params)
    assert again == rec
    assert parse_recurrence(again.to_text(), params) == again


@settings(max_examples=40, deadline=None)
@given(st.integers(-20, 20), st.integers(1, 9), monomials)
def test_format_poly_reparses(p, q, terms):
    expr = sp.Rational(p, q)*poly_of(terms)
    assert same(parse_polynomial(format_poly(expr)), expr)


def test_normalization_is_projective():
    rec = RecurrenceEq(-2*(n + 3), 2*x*(n + 2), -2*(n + 1))
    assert rec == parse_recurrence(EX1)


# -- reports -----------------------------------------------------------------------------

def hermite_reports():
    return run_algorithm(parse_recurrence("2*p[n+2] - 2*x*p[n+1] + (n+1)*p[n] = 0"), "continuous")


def test_hermite_report_text():
    reports = hermite_reports()
    assert len(reports) == 1
    text = print_report(reports[0])
    assert "family: Hermite" in text
    assert "weight ∝ exp(-x^2)" in text


def test_empty_report_list():
    assert print_report([]) == NO_SOLUTION_TEXT == "no classical orthogonal polynomial solution exists"


def test_report_output_is_deterministic():
    reports = run_algorithm(parse_recurrence(EX1), "continuous")
    assert print_report(reports) == print_report(run_algorithm(parse_recurrence(EX1), "continuous"))
    data = json.loads(print_report(reports, "json"))
    assert [r["family"] for r in data] == [r.family for r in reports]


def test_parametric_component_lists_free_symbols():
    reports = run_algorithm(parse_recurrence(EX2, [("alpha", "unknown")]), "discrete")
    text = print_report(reports)
    free_lines = [ln for ln in text.splitlines() if ln.startswith("free: ")]
    assert free_lines and "e" in free_lines[0].removeprefix("free: ").split(", ")
    assert "recurrence parameters: alpha = " in text


def test_equation_data_admissibility():
    assert EquationData.of((1, 0, -4, 1, 0)).admissible
    # a(n-1) + d = n - 2 vanishes at n = 2
    assert not EquationData.of((1, 0, 0, -1, 0)).admissible
    with pytest.raises(ValueError):
        EquationData.of((0, 0, 0, 0, 0))
