import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wclose.orders import (GREATER, LESS, Block, Grevlex, Lex, ModuleOrder, compare, default_order,
                           derivative_weight_order, grevlex, leading_term, parse_order)
from wclose.parser import parse_operator
from wclose.weyl import AlgebraSignature

W = AlgebraSignature(["x", "y"])
WT = W.localize(W.loc_ring.gen("x") ** 2 - W.loc_ring.gen("y") ** 3)
W1 = AlgebraSignature(["x"])


def mono(*exps, T=0, pos=0):
    return tuple(exps) + (T, pos)


def test_compare_examples():
    C = AlgebraSignature(["x", "y"], derivatives=())
    assert compare(grevlex(C), mono(1, 1), mono(0, 2)) == GREATER
    L = W1.localize(W1.loc_ring.gen("x"))
    assert compare(default_order(L), mono(0, 0, T=1), mono(100, 100)) == GREATER
    w = derivative_weight_order(W1)
    assert compare(w, mono(0, 1), mono(5, 0)) == GREATER


def test_leading_term_examples(cusp_ops):
    g1, _, euler = cusp_ops
    order = grevlex(W)
    # y^3*Dx has total degree 4 and beats x^2*Dx (degree 3)
    m, c = leading_term(g1, order)
    assert m == mono(0, 3, 1, 0) and c == -1
    m, c = leading_term(euler, order)
    assert m == mono(1, 0, 1, 0) and c == 3
    fT1 = parse_operator("(x^2 - y^3)*T - 1", WT)
    m, _ = leading_term(fT1, default_order(WT))
    assert m == mono(0, 3, 0, 0, T=1)
    with pytest.raises(ValueError):
        leading_term(W.zero(), order)


def test_parse_order():
    assert parse_order("grevlex", W).describe(W) == "grevlex(x,y,Dx,Dy)"
    o = parse_order("grevlex(y,x,Dy,Dx)", W)
    assert compare(o, mono(0, 1, 0, 0), mono(1, 0, 0, 0)) == GREATER
    assert parse_order("elim", W).describe(W) == "lex(x,y) > lex(Dx,Dy)"
    w = parse_order("weight(0,0,1,1)", W)
    assert compare(w, mono(0, 0, 1, 0), mono(5, 5, 0, 0)) == GREATER
    assert parse_order("lex, top", W).position == "top"
    for bad in ("grevlex(x,y)", "weight(1,2)", "weight(0,0,-1,1)", "revlex"):
        with pytest.raises(ValueError):
            parse_order(bad, W)


def test_block_rejects_overlap():
    with pytest.raises(ValueError):
        Block([Grevlex([0, 1]), Lex([1, 2])])


V = AlgebraSignature(["x", "y"], rank=3)
ORDERS = {
    "grevlex": grevlex(V),
    "lex": ModuleOrder(Lex(range(4))),
    "elim": parse_order("elim", V),
    "weight": derivative_weight_order(V),
    "grevlex-top": parse_order("grevlex, top", V),
    "priority": ModuleOrder(Grevlex(range(4)), position_priority=[2, 0, 1]),
}
monos = st.tuples(*[st.integers(0, 4)] * 4, st.integers(0, 2), st.integers(0, 2))


@pytest.mark.parametrize("name", sorted(ORDERS))
@settings(max_examples=300)
@given(a=monos, b=monos, m=st.tuples(*[st.integers(0, 3)] * 4))
def test_multiplicative_and_total(name, a, b, m):
    order = ORDERS[name]
    c = compare(order, a, b)
    assert (c == 0) == (a == b)
    assert compare(order, b, a) == -c
    shift = lambda u: tuple(x + y for x, y in zip(u[:4], m)) + u[4:]
    if c:
        assert compare(order, shift(a), shift(b)) == c


@pytest.mark.parametrize("name", sorted(ORDERS))
@settings(max_examples=300)
@given(a=monos, m=st.tuples(*[st.integers(0, 3)] * 4))
def test_divisor_minimality(name, a, m):
    order = ORDERS[name]
    b = tuple(x + y for x, y in zip(a[:4], m)) + a[4:]
    if b != a:
        assert compare(order, a, b) == LESS


@pytest.mark.parametrize("name", sorted(ORDERS))
@settings(max_examples=300)
@given(a=monos, b=monos)
def test_T_elimination_dominance(name, a, b):
    order = ORDERS[name]
    if a[4] > 0 and b[4] == 0:
        assert compare(order, a, b) == GREATER


@pytest.mark.parametrize("name", sorted(ORDERS))
def test_descending_chains_terminate(name):
    order = ORDERS[name]
    rng = random.Random(name)
    for _ in range(50):
        cur = tuple(rng.randint(0, 4) for _ in range(4)) + (0, rng.randint(0, 2))
        steps = 0
        while True:
            # pick a random smaller monomial at the same position, if any exists in a bounded box
            cands = [tuple(rng.randint(0, 4) for _ in range(4)) + (0, cur[5]) for _ in range(40)]
            smaller = [c for c in cands if compare(order, c, cur) == LESS]
            if not smaller:
                break
            cur = max(smaller, key=order.key)
            steps += 1
            assert steps < 5**4
        zero = (0, 0, 0, 0, 0, cur[5])
        assert compare(order, zero, cur) <= 0


@pytest.mark.parametrize("name", sorted(ORDERS))
def test_multiplicative_ten_thousand_triples(name):
    order = ORDERS[name]
    rng = random.Random(1234)
    r = lambda: tuple(rng.randint(0, 4) for _ in range(4)) + (rng.randint(0, 2), rng.randint(0, 2))
    for _ in range(10**4):
        a, b = r(), r()
        m = tuple(rng.randint(0, 3) for _ in range(4))
        c = compare(order, a, b)
        if c:
            sa = tuple(x + y for x, y in zip(a[:4], m)) + a[4:]
            sb = tuple(x + y for x, y in zip(b[:4], m)) + b[4:]
            assert compare(order, sa, sb) == c
