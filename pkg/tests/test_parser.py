from pathlib import Path

import pytest
from hypothesis import given, settings

from wclose.fields import PrimeField
from wclose.parser import (ParseError, format_problem, load_problem, parse_function, parse_operator,
                           parse_polynomial, parse_problem)
from wclose.weyl import AlgebraSignature, format_element

from .strategies import operators

W = AlgebraSignature(["x", "y"])
M = AlgebraSignature(["x"], ["t"])
PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def test_expression_examples():
    assert parse_operator("Dx*(x^2 - y^3)", W) == parse_operator("(x^2 - y^3)*Dx + 2*x", W)
    assert parse_operator("[0]", W) == W.zero()
    e = parse_operator("3*x*Dx + 2*y*Dy + 6", W)
    assert format_element(e) == "3*x*Dx + 2*y*Dy + 6"
    assert parse_operator("Dx*x", W) == parse_operator("x*Dx + 1", W)
    assert parse_operator("x/2 + 1/2", W) == parse_operator("(x + 1)/2", W)
    # t is a coefficient, so dividing by it is allowed
    assert parse_operator("Dt*(1/t)", M) == parse_operator("1/t*Dt - 1/t^2", M)


def test_vectors():
    V = W.variant(rank=2)
    v = parse_operator("[Dx, x]", V)
    assert len(v.terms) == 2
    with pytest.raises(ParseError):
        parse_operator("[Dx, x, y]", V)


def test_functions():
    R = W.function_ring
    f = parse_function("1/(x^2 - y^3)", R)
    # denominators are normalized to leading coefficient 1 under grevlex
    assert f.num == -R.one and f.den == parse_polynomial("y^3 - x^2", R)
    assert parse_polynomial("(x+y)^2", R) == parse_polynomial("x^2 + 2*x*y + y^2", R)
    with pytest.raises(ParseError):
        parse_polynomial("1/x", R)


@pytest.mark.parametrize("text,col", [
    ("x + * y", 5),
    ("Dz", 1),
    ("x^-1", 4),
    ("(x + 1", 7),
    ("x/(y + 1)", 2),
])
def test_error_positions(text, col):
    with pytest.raises(ParseError) as exc:
        parse_operator(text, W)
    assert exc.value.line == 1
    assert exc.value.col == col


def test_problem_errors_name_the_line():
    with pytest.raises(ParseError) as exc:
        parse_problem("vars: x, y\ngen: Dx\ngen: x + * y\n")
    assert exc.value.line == 3
    with pytest.raises(ParseError) as exc:
        parse_problem("vars: x\nbogus: 1\n")
    assert exc.value.line == 2
    with pytest.raises(ParseError):
        parse_problem("vars: x\norder: grevlex(x)\n")
    with pytest.raises(ParseError):
        parse_problem("vars: x\nloc: Dx\n")


def test_problem_files_load():
    pf = load_problem(PROBLEMS / "example_x2y3.prob")
    assert pf.poly_vars == ["x", "y"] and len(pf.generators) == 2
    assert pf.function is not None
    pf = load_problem(PROBLEMS / "exp1.prob")
    assert isinstance(pf.sig.base_field, PrimeField)
    assert pf.exp_poly is not None
    pf = load_problem(PROBLEMS / "ssw2_mixed.prob")
    assert pf.rat_vars == ["t"]
    pf = load_problem(PROBLEMS / "example_x2y3.prob", field_spec="Fp(7)")
    assert pf.field_spec == "Fp(7)"


def test_continuation_lines():
    pf = parse_problem("vars: x,\n  y\ngen: Dx*(x^2 -\n   y^3)\n")
    assert pf.poly_vars == ["x", "y"]
    assert pf.generators[0] == parse_operator("(x^2 - y^3)*Dx + 2*x", pf.sig)


def test_format_problem_round_trip():
    for path in sorted(PROBLEMS.glob("*.prob")):
        pf = load_problem(path)
        again = parse_problem(format_problem(pf))
        assert again.generators == pf.generators
        assert again.poly_vars == pf.poly_vars and again.rat_vars == pf.rat_vars
        assert again.loc_poly == pf.loc_poly and again.order_text == pf.order_text


@settings(max_examples=200)
@given(operators(W, max_deg=3, max_terms=5))
def test_print_parse_round_trip(P):
    assert parse_operator(format_element(P), W) == P


@settings(max_examples=100)
@given(operators(M, max_deg=2, max_terms=4))
def test_round_trip_with_rational_coefficients(P):
    assert parse_operator(format_element(P), M) == P


@settings(max_examples=100)
@given(operators(W.variant(rank=2), max_deg=2, max_terms=4, positions=True))
def test_round_trip_vectors(P):
    V = P.sig
    assert parse_operator(format_element(P), V) == P
