"""Principal symbols, the initial module and the singular locus.

The symbol ring K(t)[x, xi, zeta] is modelled as a commutative signature
with the same slot layout as the Weyl signature it comes from: each
derivative slot is renamed (Dx -> xi_x, Dt -> zeta_t), so translating an
element is a relabelling of its signature.
"""

from __future__ import annotations

import logging
from functools import reduce
from typing import List, Optional, Sequence

from .groebner import Budget, buchberger
from .orders import Block, Grevlex, ModuleOrder, derivative_weight_order
from .poly import MultiPoly
from .weyl import AlgebraSignature, WeylElement

log = logging.getLogger(__name__)


class NotFiniteRankError(ValueError):
    """The singular locus is the whole space (zero elimination ideal)."""


def symbol_name(sig: AlgebraSignature, slot: int) -> str:
    if slot < sig.nx:
        return sig.slot_names[slot]
    for i, s in enumerate(sig.dx_slot):
        if s == slot:
            return "xi_" + sig.poly_vars[i]
    for j, s in enumerate(sig.dt_slot):
        if s == slot:
            return "zeta_" + sig.rational_vars[j]
    raise IndexError(slot)


def symbol_signature(sig: AlgebraSignature, rank: Optional[int] = None) -> AlgebraSignature:
    """Commutative K(t)[x, xi, zeta]^rank with the slot layout of ``sig``."""
    if sig.is_commutative:
        return sig if rank is None else sig.variant(rank=rank)
    names = tuple(symbol_name(sig, s) for s in range(sig.N))
    return AlgebraSignature(
        names, sig.rational_vars, field=sig.base_field,
        rank=sig.rank if rank is None else rank, derivatives=(),
    )


def initial_form(P: WeylElement) -> WeylElement:
    """Top derivative-degree part of ``P`` with derivatives read as commuting symbols."""
    sig = P.sig
    if not P.terms:
        raise ValueError("initial form of the zero element is undefined")
    if not P.is_T_free():
        raise ValueError("initial forms are taken of T-free operators")
    ds = sig.deriv_slots
    deg = {m: sum(m[i] for i in ds) for m in P.terms}
    c = max(deg.values())
    sym = symbol_signature(sig)
    return WeylElement(sym, {m: v for m, v in P.terms.items() if deg[m] == c})


def initial_module(S_gens: Sequence[WeylElement], budget: Optional[Budget] = None) -> List[WeylElement]:
    """Initial forms of a Gröbner basis under the derivative weight order.

    These generate the initial module of ``S`` (standard Gröbner deformation).
    """
    gens = [g for g in S_gens if g.terms]
    if not gens:
        return []
    sig = gens[0].sig
    G = buchberger(gens, derivative_weight_order(sig), budget=budget)
    return [initial_form(g) for g in G]


# -- commutative helpers with an auxiliary tag variable ----------------------

def _tagged(sig: AlgebraSignature):
    name = "u"
    while name in sig.slot_names or name in sig.rational_vars:
        name += "_"
    sig_u = sig.variant(poly_vars=(name,) + sig.poly_vars, derivatives=())
    order = ModuleOrder(Block([Grevlex([0]), Grevlex(range(1, sig_u.N))]), position="top")
    return sig_u, order


def _lift(sig_u, P: WeylElement, u_power: int = 0) -> WeylElement:
    return WeylElement(sig_u, {(u_power,) + m: c for m, c in P.terms.items()})


def _drop(sig, P: WeylElement) -> WeylElement:
    return WeylElement(sig, {m[1:]: c for m, c in P.terms.items()})


def _u_free(sig, G) -> List[WeylElement]:
    return [_drop(sig, g) for g in G if all(m[0] == 0 for m in g.terms)]


def _check_commutative(gens):
    sig = gens[0].sig
    if not sig.is_commutative:
        raise ValueError("commutative signature expected")
    for g in gens:
        if g.sig != sig:
            raise ValueError("generators from different signatures")
    return sig


def saturate_commutative(A_gens: Sequence[WeylElement], g, budget: Optional[Budget] = None) -> List[WeylElement]:
    """Generators of ``A : (g)^inf`` via an auxiliary variable u with ``u*g - 1``."""
    A = [a for a in A_gens if a.terms]
    if not A:
        return []
    sig = _check_commutative(A)
    if isinstance(g, MultiPoly):
        g = sig.from_poly(g)
    if not g.is_scalar():
        raise ValueError("saturation needs a scalar polynomial")
    sig_u, order = _tagged(sig)
    K = sig.coeff_field
    gens = [_lift(sig_u, a) for a in A]
    ug = _lift(sig_u, g, 1)
    for i in range(sig.rank):
        e = WeylElement(sig_u, {m[:-1] + (i,): c for m, c in ug.terms.items()})
        gens.append(e - sig_u.constant(K.one, position=i))
    G = buchberger(gens, order, budget=budget)
    return _u_free(sig, G)


def module_intersection(A_gens: Sequence[WeylElement], B_gens: Sequence[WeylElement],
                        budget: Optional[Budget] = None) -> List[WeylElement]:
    """Generators of ``A ∩ B`` from ``u*A + (1-u)*B`` after eliminating u."""
    A = [a for a in A_gens if a.terms]
    B = [b for b in B_gens if b.terms]
    if not A or not B:
        return []
    sig = _check_commutative(A + B)
    sig_u, order = _tagged(sig)
    gens = [_lift(sig_u, a, 1) for a in A]
    gens += [_lift(sig_u, b) - _lift(sig_u, b, 1) for b in B]
    G = buchberger(gens, order, budget=budget)
    return _u_free(sig, G)


def annihilator_ideal(N_gens: Sequence[WeylElement], budget: Optional[Budget] = None) -> List[WeylElement]:
    """``Ann(R^r / N) = ∩_i (N : e_i)`` as an ideal in the rank-1 ring."""
    N = [g for g in N_gens if g.terms]
    if not N:
        return []
    sig = _check_commutative(N)
    sig1 = sig.variant(rank=1)
    if sig.rank == 1:
        return [WeylElement(sig1, dict(g.terms)) for g in N]
    ideals = []
    for i in range(sig.rank):
        prio = [p for p in range(sig.rank) if p != i] + [i]
        order = ModuleOrder(Grevlex(range(sig.N)), position="pot", position_priority=prio)
        G = buchberger(N, order, budget=budget)
        quot = [
            WeylElement(sig1, {m[:-1] + (0,): c for m, c in g.terms.items()})
            for g in G if g.positions() == {i}
        ]
        ideals.append(quot)
    return reduce(lambda a, b: module_intersection(a, b, budget), ideals)


def _to_loc_poly(sig: AlgebraSignature, P: WeylElement) -> MultiPoly:
    ring = sig.loc_ring
    return ring.from_dict({m[: sig.nx]: c for m, c in P.terms.items()})


def singular_locus(S_gens: Sequence[WeylElement], budget: Optional[Budget] = None) -> List[MultiPoly]:
    """Generators (in K(t)[x]) of the ideal cutting out the singular locus.

    ``[1]`` means the locus is empty; ``[]`` means it is everything.
    """
    gens = [g for g in S_gens if g.terms]
    if not gens:
        raise NotFiniteRankError("zero module: the singular locus is the whole space")
    sig = gens[0].sig
    if sig.has_T:
        raise ValueError("singular locus is computed for T-free modules")
    ini = initial_module(gens, budget)
    J = annihilator_ideal(ini, budget)
    if not J:
        return []
    sym = J[0].sig
    sats = [saturate_commutative(J, sym.gen(sym.slot_names[s]), budget) for s in sig.deriv_slots]
    I = reduce(lambda a, b: module_intersection(a, b, budget), sats) if sats else J
    if not I:
        return []
    xi = [s for s in range(sym.N) if s >= sig.nx]
    order = ModuleOrder(Block([Grevlex(xi), Grevlex(range(sig.nx))]) if xi else Grevlex(range(sym.N)))
    G = buchberger(I, order, budget=budget)
    out = [g for g in G if all(not m[i] for m in g.terms for i in xi)]
    return [_to_loc_poly(sig, g) for g in out]


def pick_loc_poly(sing_gens: Sequence[MultiPoly]) -> MultiPoly:
    """A single polynomial vanishing on the locus: the product of the generators."""
    if not sing_gens:
        raise NotFiniteRankError("the singular locus is the whole space; input is not of finite rank")
    ring = sing_gens[0].ring
    if any(p.is_constant() and p.terms for p in sing_gens):
        return ring.one
    return reduce(lambda a, b: a * b, sing_gens).monic()
