"""Annihilating operators of 1/q and exp(g) for benchmark inputs."""

from __future__ import annotations

from typing import List

from .poly import MultiPoly
from .ratfun import RationalFunction
from .weyl import AlgebraSignature, WeylElement


def operator_from_function(sig: AlgebraSignature, p) -> WeylElement:
    """Multiplication operator by ``p`` in K[t, x] (or K(t)[x] for a RationalFunction)."""
    if isinstance(p, RationalFunction):
        if not p.is_polynomial():
            den_vars = p.den.variables_used()
            if any(p.ring.names[i] in sig.poly_vars for i in den_vars):
                raise ValueError("denominator involves polynomial variables")
            num = operator_from_function(sig, p.num)
            den = operator_from_function(sig, p.den)
            zero = (0,) * (sig.N + 2)
            return num.scale(sig.coeff_field.inv(den.terms[zero]))
        p = p.num.scale(p.ring.field.inv(p.den.lc()))
    ring = p.ring
    K = sig.coeff_field
    unknown = [ring.names[i] for i in p.variables_used()
               if ring.names[i] not in sig.poly_vars and ring.names[i] not in sig.rational_vars]
    if unknown:
        raise ValueError(f"variables {unknown} are not in the signature")
    out: dict = {}
    for e, c in p.terms.items():
        m = [0] * (sig.N + 2)
        coeff = K(c) if not getattr(K, "is_fraction_field", False) else K(c)
        for name, k in zip(ring.names, e):
            if not k:
                continue
            if name in sig.poly_vars:
                m[sig.poly_vars.index(name)] = k
            else:
                coeff = K.mul(coeff, K.gen(name) ** k)
        key = tuple(m)
        v = out.get(key)
        out[key] = coeff if v is None else K.add(v, coeff)
    return WeylElement(sig, {m: c for m, c in out.items() if not K.is_zero(c)})


def _deriv_vars(sig: AlgebraSignature):
    out = [(v, s) for v, s in zip(sig.poly_vars, sig.dx_slot) if s is not None]
    out += [(v, s) for v, s in zip(sig.rational_vars, sig.dt_slot) if s is not None]
    return out


def _diff_by_name(p: MultiPoly, name: str) -> MultiPoly:
    if name not in p.ring.names:
        return p.ring.zero
    return p.diff(p.ring.index(name))


def annihilator_of_rational(q: MultiPoly, sig: AlgebraSignature) -> List[WeylElement]:
    """``{q*Dv + dq/dv}``: each operator kills 1/q."""
    if not q.terms:
        raise ValueError("q must be nonzero")
    Q = operator_from_function(sig, q)
    out = []
    for v, s in _deriv_vars(sig):
        D = sig.gen(sig.slot_names[s])
        out.append(Q * D + operator_from_function(sig, _diff_by_name(q, v)))
    return out


def annihilator_of_exp(g: MultiPoly, sig: AlgebraSignature) -> List[WeylElement]:
    """``{Dv - dg/dv}``: each operator kills exp(g)."""
    out = []
    for v, s in _deriv_vars(sig):
        D = sig.gen(sig.slot_names[s])
        out.append(D - operator_from_function(sig, _diff_by_name(g, v)))
    return out


# polynomials of the benchmark families, over the function ring K[t, x]

def ssw2_denominator(ring):
    t, x, y = (ring.gen(n) for n in ("t", "x", "y"))
    return (y**2 + 1) * (x**2 + 1) * t - x * y


def exp1_polynomial(ring):
    a, b, c = (ring.gen(n) for n in ("x1", "x2", "x3"))
    return (a**2 + b**2 + c**2) * (a**4 + b**4 + c**4)


def beukers_style_polynomial(ring, c=4049, names=("x1", "x2", "x3")):
    """``1 - (1 - a*b)*c3 - c*a*b*c3*(1-a)*(1-b)*(1-c3)``: the x4 = 1 slice of the Beukers shape."""
    a, b, z = (ring.gen(n) for n in names)
    one = ring.one
    return one - (one - a * b) * z - c * a * b * z * (one - a) * (one - b) * (one - z)
