"""Hypothesis strategies for small random polynomials and operators."""

from hypothesis import strategies as st

from wclose.weyl import WeylElement

small_ints = st.integers(min_value=-5, max_value=5)


def exponents(n, max_deg):
    return st.tuples(*[st.integers(0, max_deg)] * n)


@st.composite
def polys(draw, ring, max_deg=2, max_terms=4, nonzero=False):
    K = ring.field
    terms = draw(st.dictionaries(exponents(ring.nvars, max_deg), small_ints, max_size=max_terms))
    p = ring.from_dict({e: K(c) for e, c in terms.items() if c})
    if nonzero and not p.terms:
        p = ring.one
    return p


@st.composite
def operators(draw, sig, max_deg=2, max_terms=4, T=False, positions=False):
    K = sig.coeff_field
    width = sig.N
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        e = draw(exponents(width, max_deg))
        j = draw(st.integers(0, 2)) if T else 0
        pos = draw(st.integers(0, sig.rank - 1)) if positions else 0
        c = draw(small_ints)
        if c:
            terms[e + (j, pos)] = K(c)
    return WeylElement(sig, terms)
