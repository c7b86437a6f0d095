import pytest
from hypothesis import given, settings

from wclose.annihilators import (annihilator_of_exp, annihilator_of_rational, beukers_style_polynomial,
                                 exp1_polynomial, operator_from_function, ssw2_denominator)
from wclose.fields import PrimeField
from wclose.parser import parse_operator, parse_polynomial
from wclose.ratfun import RationalFunction
from wclose.weyl import AlgebraSignature, annihilates

from .strategies import polys

W1 = AlgebraSignature(["x"])
W = AlgebraSignature(["x", "y"])
M = AlgebraSignature(["x"], ["t"])


def test_examples():
    x = W1.function_ring.gen("x")
    assert annihilator_of_rational(x, W1) == [parse_operator("x*Dx + 1", W1)]
    assert annihilator_of_exp(x, W1) == [parse_operator("Dx - 1", W1)]
    assert annihilator_of_exp(W.function_ring.zero, W) == [parse_operator("Dx", W), parse_operator("Dy", W)]
    with pytest.raises(ValueError):
        annihilator_of_rational(W.function_ring.zero, W)


def test_cusp_generators(cusp_ops):
    g1, g2, _ = cusp_ops
    q = parse_polynomial("x^2 - y^3", W.function_ring)
    assert annihilator_of_rational(q, W) == [g1, g2]


def test_rational_variable_gets_its_own_operator():
    q = parse_polynomial("t*x - 1", M.function_ring)
    ops = annihilator_of_rational(q, M)
    assert len(ops) == 2
    assert parse_operator("Dt*(t*x - 1)", M) in ops
    f = RationalFunction(M.function_ring.one, q)
    assert all(annihilates(P, f) for P in ops)


def test_operator_from_function():
    R = M.function_ring
    P = operator_from_function(M, parse_polynomial("t^2*x + 3", R))
    assert P == parse_operator("t^2*x + 3", M)
    with pytest.raises(ValueError):
        operator_from_function(W1, parse_polynomial("y", W.function_ring))
    with pytest.raises(ValueError):
        operator_from_function(M, RationalFunction(R.one, R.gen("x")))


def test_benchmark_polynomials():
    R = AlgebraSignature(["x", "y"], ["t"]).function_ring
    assert ssw2_denominator(R) == parse_polynomial("(y^2+1)*(x^2+1)*t - x*y", R)
    S3 = AlgebraSignature(["x1", "x2", "x3"], field=PrimeField(536870909))
    e = exp1_polynomial(S3.function_ring)
    assert e == parse_polynomial("(x1^2+x2^2+x3^2)*(x1^4+x2^4+x3^4)", S3.function_ring)
    b = beukers_style_polynomial(S3.function_ring, c=7)
    assert b == parse_polynomial("1 - (1 - x1*x2)*x3 - 7*x1*x2*x3*(1-x1)*(1-x2)*(1-x3)", S3.function_ring)


@settings(max_examples=40)
@given(polys(W.function_ring, 3, 4, nonzero=True))
def test_rational_annihilators_kill(q):
    f = RationalFunction(W.function_ring.one, q)
    assert all(annihilates(P, f) for P in annihilator_of_rational(q, W))


@settings(max_examples=40)
@given(polys(W.function_ring, 3, 4))
def test_exp_annihilators_kill(g):
    one = RationalFunction(W.function_ring.one)
    assert all(annihilates(P, one, exp_twist=g) for P in annihilator_of_exp(g, W))
