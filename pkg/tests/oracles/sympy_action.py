"""Apply operators to functions with sympy: an action independent of the package's.

Each normal-ordered term c * x^a * D^b * T^j e_i acts on h_i as
c * x^a * d^b/dv^b (h_i / f^j).
"""

import sympy

from wclose.ratfun import RationalFunction


def poly_to_sympy(p, symbols):
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator)) if hasattr(c, "numerator") else sympy.Integer(int(c))
        for name, k in zip(p.ring.names, e):
            term *= symbols[name] ** k
        expr += term
    return expr


def coeff_to_sympy(c, symbols):
    if isinstance(c, RationalFunction):
        return poly_to_sympy(c.num, symbols) / poly_to_sympy(c.den, symbols)
    return sympy.Rational(int(c.numerator), int(c.denominator))


def apply(P, funcs, symbols, exp_g=None):
    """``P`` applied to the sympy expressions ``funcs`` (one per position)."""
    sig = P.sig
    N = sig.N
    deriv_var = {}
    for v, s in zip(sig.poly_vars, sig.dx_slot):
        if s is not None:
            deriv_var[s] = symbols[v]
    for v, s in zip(sig.rational_vars, sig.dt_slot):
        if s is not None:
            deriv_var[s] = symbols[v]
    f = poly_to_sympy(sig.localization, symbols) if sig.has_T else None
    weight = sympy.exp(exp_g) if exp_g is not None else 1
    out = [sympy.Integer(0)] * sig.rank
    for m, c in P.terms.items():
        pos = m[N + 1]
        h = funcs[pos] * weight
        if m[N]:
            h = h / f ** m[N]
        for s in range(sig.nx, N):
            if m[s]:
                h = sympy.diff(h, deriv_var[s], m[s])
        term = coeff_to_sympy(c, symbols) * h
        for i in range(sig.nx):
            term *= symbols[sig.poly_vars[i]] ** m[i]
        out[pos] += term
    if exp_g is not None:
        out = [e / weight for e in out]
    return [sympy.simplify(sympy.together(e)) for e in out]
