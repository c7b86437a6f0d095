import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wclose.annihilators import annihilator_of_rational
from wclose.groebner import buchberger, module_membership
from wclose.parser import parse_operator
from wclose.symbol import (NotFiniteRankError, annihilator_ideal, initial_form, initial_module,
                           module_intersection, pick_loc_poly, saturate_commutative, singular_locus,
                           symbol_signature)
from wclose.weyl import AlgebraSignature, WeylElement

from .oracles import naive_groebner
from .strategies import operators, polys

W = AlgebraSignature(["x", "y"])
S = symbol_signature(W)
W1 = AlgebraSignature(["x"])
C = AlgebraSignature(["x", "y"], derivatives=())


def op(text, sig=W):
    return parse_operator(text, sig)


def same_module(A, B):
    GA, GB = buchberger(A), buchberger(B)
    return all(module_membership(a, GB) for a in A) and all(module_membership(b, GA) for b in B)


def test_symbol_names():
    assert S.slot_names == ("x", "y", "xi_x", "xi_y")
    M = AlgebraSignature(["x"], ["t"])
    assert symbol_signature(M).slot_names == ("x", "xi_x", "zeta_t")


def test_initial_form_examples(cusp_ops):
    g1, _, _ = cusp_ops
    assert initial_form(g1) == op("(x^2 - y^3)*xi_x", S)
    assert initial_form(op("x^2 + 3")) == op("x^2 + 3", S)
    M = AlgebraSignature(["x"], ["t"])
    assert initial_form(op("Dt + x*Dx", M)) == op("zeta_t + x*xi_x", symbol_signature(M))
    with pytest.raises(ValueError):
        initial_form(W.zero())


def test_initial_module_examples(cusp_ops):
    g1, g2, _ = cusp_ops
    ini = initial_module([g1, g2])
    G = buchberger(ini)
    for text in ("(x^2 - y^3)*xi_x", "(x^2 - y^3)*xi_y", "(x^2 - y^3)*(3*x*xi_x + 2*y*xi_y)"):
        assert module_membership(op(text, S), G)
    assert initial_module([op("Dx", W1)]) == [op("xi_x", symbol_signature(W1))]
    assert initial_module([op("x", W1)]) == [op("x", symbol_signature(W1))]


def test_saturation_examples():
    assert same_module(saturate_commutative([op("x^2*y", C)], op("x", C)), [op("y", C)])
    K = AlgebraSignature(["x", "xi"], derivatives=())
    assert same_module(saturate_commutative([op("x*xi", K)], op("xi", K)), [op("x", K)])
    assert same_module(saturate_commutative([op("x", C)], op("y", C)), [op("x", C)])


def test_intersection_examples():
    assert same_module(module_intersection([op("x", C)], [op("y", C)]), [op("x*y", C)])
    A = [op("x^2 - y", C), op("x*y", C)]
    assert same_module(module_intersection(A, A), A)
    V = C.variant(rank=2)
    got = module_intersection([op("[x, 0]", V), op("[0, 1]", V)], [op("[0, 1]", V)])
    assert same_module(got, [op("[0, 1]", V)])


def test_annihilator_ideal_rank_two():
    V = C.variant(rank=2)
    # R^2 / <x e1, y e2> is annihilated by <x> ∩ <y> = <xy>
    ann = annihilator_ideal([op("[x, 0]", V), op("[0, y]", V)])
    assert same_module(ann, [op("x*y", C)])


def test_singular_locus_examples(cusp_ops):
    g1, g2, _ = cusp_ops
    sing = singular_locus([g1, g2])
    assert len(sing) == 1 and sing[0] == (W.loc_ring.gen("y") ** 3 - W.loc_ring.gen("x") ** 2)
    assert [p.to_str() for p in singular_locus([op("Dx", W1)])] == ["1"]
    assert [p.to_str() for p in singular_locus([op("x*Dx + 1", W1)])] == ["x"]
    with pytest.raises(NotFiniteRankError):
        pick_loc_poly(singular_locus([op("Dx")]))


def test_pick_loc_poly_examples():
    R = W.loc_ring
    x, y = R.gen("x"), R.gen("y")
    assert pick_loc_poly([x**2 - y**3]) == (x**2 - y**3).monic()
    assert pick_loc_poly([x, y]) == x * y
    assert pick_loc_poly([R.one]) == R.one
    with pytest.raises(NotFiniteRankError):
        pick_loc_poly([])


def _dicts(P):
    return {m[: P.sig.N]: Fraction(int(c.numerator), int(c.denominator)) for m, c in P.terms.items()}


def test_singular_locus_against_naive_engine(cusp_ops):
    g1, g2, _ = cusp_ops
    ini = [_dicts(P) for P in initial_module([g1, g2])]
    # slots: x, y, xi_x, xi_y; saturate by each xi, intersect, drop xi
    sx = naive_groebner.saturate(ini, 2)
    sy = naive_groebner.saturate(ini, 3)
    inter = naive_groebner.intersect(sx, sy)
    reorder = [{(e[2], e[3], e[0], e[1]): c for e, c in p.items()} for p in inter]
    elim = naive_groebner.eliminate(reorder, 2)
    assert len(elim) == 1
    ref = elim[0]
    ours = singular_locus([g1, g2])[0]
    lead = max(ref, key=naive_groebner.grevlex)
    ref = {e: c / ref[lead] for e, c in ref.items()}
    assert {e: Fraction(int(c.numerator), int(c.denominator)) for e, c in ours.terms.items()} == ref


@settings(max_examples=25)
@given(operators(W, max_deg=2, max_terms=3), st.sampled_from([(1, 0), (0, 1), (2, 0), (1, 1)]))
def test_initial_form_compatibility(P, mexp):
    if not P.terms:
        return
    m = W.monomial(mexp + (0, 0))
    assert initial_form(m * P) == WeylElement(S, dict((m * initial_form_as_weyl(P)).terms))
    c = P.derivative_degree()
    assert (op("Dx") * P).derivative_degree() == c + 1


def initial_form_as_weyl(P):
    return WeylElement(P.sig, dict(initial_form(P).terms))


@pytest.mark.parametrize("seed", range(4))
def test_saturation_fixed_point_and_containment(seed):
    rng = random.Random(seed)
    R = C.loc_ring
    x, y = R.gen("x"), R.gen("y")
    A = [C.from_poly(x ** rng.randint(1, 3) * y + y ** rng.randint(0, 2)), C.from_poly(x * y ** 2 - x)]
    g = C.from_poly(x if seed % 2 else y)
    sat = saturate_commutative(A, g)
    Gs = buchberger(sat)
    assert all(module_membership(a, Gs) for a in A)
    assert same_module(saturate_commutative(sat, g), sat)


@settings(max_examples=8)
@given(polys(W.function_ring, 2, 3, nonzero=True))
def test_locus_contains_pole_polynomial(q):
    if q.is_constant():
        return
    gens = annihilator_of_rational(q, W)
    sing = singular_locus(gens)
    G = buchberger([C.from_poly(p) for p in sing])
    qq = C.from_poly(W.loc_ring.convert(q))
    assert any(module_membership(qq ** k, G) for k in range(1, 6))
