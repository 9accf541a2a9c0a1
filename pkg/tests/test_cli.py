import io
import json

import jsonschema
import pytest
import sympy as sp

from classicalop.cli import CLASSIFY_SCHEMA, EXIT_INCOMPLETE, EXIT_NONE, EXIT_OK, EXIT_SHAPE, EXIT_USAGE, main
from classicalop.exprio import NO_SOLUTION_TEXT

EX1 = "(n+3)*p[n+2] - x*(n+2)*p[n+1] + (n+1)*p[n] = 0"
EX2 = "p[n+2] - (x-n-1)*p[n+1] + alpha*(n+1)^2*p[n] = 0"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def classify_json(*argv):
    code, text = run("classify", "--json", *argv)
    data = json.loads(text)
    jsonschema.validate(data, CLASSIFY_SCHEMA)
    return code, data


def test_first_example_both_modes():
    code, data = classify_json("--mode", "both", EX1)
    assert code == EXIT_OK
    assert data["shift_N"] == 0 and data["mode"] == "both"
    sols = data["solutions"]
    assert len(sols) == 4
    assert all(s["transform"] == {"f": "1", "g": "0"} and s["family"] == "Jacobi" for s in sols)


def test_unknown_parameter_is_solved():
    code, data = classify_json("--mode", "continuous", "--param", "alpha=unknown", EX2)
    assert code == EXIT_OK
    assert [s["solved"]["alpha"] for s in data["solutions"]] == ["1/4"]


def test_third_example_json_keeps_free_symbols():
    code, data = classify_json("--mode", "discrete", "--param", "alpha=unknown", EX2)
    assert code == EXIT_OK and len(data["solutions"]) == 1
    sol = data["solutions"][0]
    assert (sol["equation"]["d"], sol["equation"]["e"]) == ("1", "e")
    b = sp.Symbol("b")
    alpha = sp.sympify(sol["solved"]["alpha"].replace("^", "**"))
    assert sp.cancel(alpha - b*(b + 1)/(2*b + 1)**2) == 0


def test_shape_rejection_exit_code():
    code, text = run("classify", "p[n+2] - (x^2)*p[n+1] + p[n] = 0")
    assert code == EXIT_SHAPE and text.strip() == NO_SOLUTION_TEXT


def test_degree_bound_exit_code():
    code, _ = run("classify", "--mode", "continuous", "p[n+2] - x*p[n+1] + (n^5+1)*p[n] = 0")
    assert code == EXIT_SHAPE


def test_no_solution_exit_code():
    code, text = run("classify", "--mode", "continuous", "(n+1)*p[n+2] - ((n+1)*x - 1)*p[n+1] + (n+1)*p[n] = 0")
    assert code == EXIT_NONE
    assert text.rstrip().endswith(NO_SOLUTION_TEXT)


def test_undeclared_identifier(capsys):
    code, _ = run("classify", "p[n+2] + y*p[n] = 0")
    assert code == EXIT_USAGE
    assert "parse error" in capsys.readouterr().err


def test_malformed_input_reports_position(capsys):
    code, _ = run("classify", "p[n+2] + (x*p[n] = 0")
    assert code == EXIT_USAGE
    assert "18" in capsys.readouterr().err


def test_budget_exhaustion():
    code, _ = run("classify", "--budget", "1", "p[n+2] - x*p[n+1] + (n+1)*p[n] = 0")
    assert code == EXIT_INCOMPLETE


def test_bad_param_mode():
    code, _ = run("classify", "--param", "alpha=sometimes", EX2)
    assert code == EXIT_USAGE


def test_stdin(monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(EX1 + "\n"))
    code, data = classify_json("--mode", "continuous", "-")
    assert code == EXIT_OK and len(data["solutions"]) == 4


def test_output_is_byte_deterministic():
    first = run("classify", "--json", "--param", "alpha=unknown", EX2)
    second = run("classify", "--json", "--param", "alpha=unknown", EX2)
    assert first == second
    assert run("classify", EX1) == run("classify", EX1)


def test_derive_hermite_preset():
    code, text = run("derive", "--sigma", "0,0,1", "--tau=-2,0", "--std", "hermite", "--json")
    assert code == EXIT_OK
    rel = json.loads(text)["relations"]
    assert (rel["A"], rel["B"], rel["C"], rel["lambda_n"]) == ("2", "0", "2*n", "2*n")


def test_derive_custom_ratio():
    code, text = run("derive", "--sigma", "0,0,1", "--tau=-2,0", "--std", "n+1", "--json")
    assert code == EXIT_OK
    assert json.loads(text)["relations"]["A"] == "n + 1"


def test_expand_and_verify():
    code, text = run("verify", "--sigma", "0,0,1", "--tau=-2,0", "--nmax", "3", "--json")
    data = json.loads(text)
    assert code == EXIT_OK and data["verified"] is True
    assert data["polynomials"][3] == "x^3 - 3*x/2"
    code, text = run("expand", "--sigma", "0,1,0", "--tau=-1,0", "--kind", "discrete", "--nmax", "3")
    assert code == EXIT_OK
    assert "p_3(x) = x^3 - 3*x^2 + 2*x" in text


def test_expand_degenerate_family_is_reported(capsys):
    code, _ = run("expand", "--sigma", "1,0,1", "--tau=-1,0", "--nmax", "3")
    assert code == EXIT_USAGE and "error" in capsys.readouterr().err


def test_square_annihilates_squares():
    code, text = run("square", "--json", "p[n+2] - x*p[n+1] + p[n] = 0")
    assert code == EXIT_OK
    data = json.loads(text)
    assert data["order"] == 3
    x = sp.Symbol("x")
    coeffs = [sp.sympify(c.replace("^", "**")) for c in data["coefficients"]]
    # Chebyshev-U type iterates at x = 3/7
    xv = sp.Rational(3, 7)
    ys = [sp.Integer(1), xv]
    for _ in range(10):
        ys.append(xv*ys[-1] - ys[-2])
    sq = [v*v for v in ys]
    for m in range(8):
        assert sum(c.subs(x, xv)*sq[m + i] for i, c in enumerate(coeffs)) == 0


def test_usage_error_without_command():
    code, _ = run()
    assert code == EXIT_USAGE


@pytest.mark.parametrize("argv", [["--version"], ["classify", "--help"]])
def test_informational_flags_exit_zero(argv, capsys):
    assert run(*argv)[0] == EXIT_OK
