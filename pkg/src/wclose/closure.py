"""Partial Weyl closure by truncated Rabinowitsch saturation.

With T standing for 1/f, the closure ``S : (f)^inf`` is the T-free part of
the module generated over W[T] by S and ``(f*T - 1) e_i``.  Truncating the
T-degree of the generators at s and letting s grow yields an increasing
chain of submodules of the closure; the loop stops once the T-free part is
holonomic (or per one of the alternative criteria).
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

from .groebner import Budget, BudgetExceeded, GroebnerBasis, buchberger, is_finite_rank, normal_form, saturation_exponent
from .holonomy import is_holonomic
from .orders import ModuleOrder, default_order, leading_term
from .poly import MultiPoly
from .symbol import NotFiniteRankError, pick_loc_poly, singular_locus
from .weyl import AlgebraSignature, WeylElement, deg_T, left_multiply_by_T_power

log = logging.getLogger(__name__)

COMPLETED = "completed"
CAP_HIT = "truncation-cap-hit"
BUDGET = "budget-exceeded"


class CertificationError(RuntimeError):
    """A sandwich inclusion could not be certified."""


@dataclass
class ClosureConfig:
    order: Optional[ModuleOrder] = None
    criterion: str = "holonomic"  # holonomic | stable-and-holonomic | holonomic-plus-extra
    extra: int = 0
    max_T_degree: int = 20
    budget: Optional[Budget] = None
    seed_previous: bool = True
    verify_input: bool = False
    k_max: int = 20
    check_T_monotone: bool = False
    keep_history: bool = True

    def __post_init__(self):
        crit = self.criterion
        if crit.startswith("holonomic-plus-extra"):
            # accept "holonomic-plus-extra(3)"
            if "(" in crit:
                self.extra = int(crit[crit.index("(") + 1: crit.rindex(")")])
            self.criterion = "holonomic-plus-extra"
        if self.criterion not in ("holonomic", "stable-and-holonomic", "holonomic-plus-extra"):
            raise ValueError(f"unknown stopping criterion {crit!r}")
        if self.max_T_degree < 1:
            raise ValueError("max_T_degree must be at least 1")
        if self.extra < 0:
            raise ValueError("extra iterations must be non-negative")

    def criterion_label(self) -> str:
        if self.criterion == "holonomic-plus-extra":
            return f"holonomic-plus-extra({self.extra})"
        return self.criterion


@dataclass
class IterationRecord:
    s: int
    generators: int
    gb_size: int
    intersected_size: int
    holonomic: bool
    witness: Optional[tuple]
    stable: bool
    seconds: float

    def to_dict(self) -> dict:
        w = None
        if self.witness is not None:
            w = {"variables": list(self.witness[0]), "position": self.witness[1]}
        return {
            "s": self.s,
            "generators": self.generators,
            "gb_size": self.gb_size,
            "intersected_size": self.intersected_size,
            "holonomic": self.holonomic,
            "witness": w,
            "stable": self.stable,
            "seconds": self.seconds,
        }


@dataclass
class ClosureResult:
    generators: List[WeylElement]
    f: MultiPoly
    order: ModuleOrder
    trace: List[IterationRecord] = field(default_factory=list)
    fired_criterion: Optional[str] = None
    status: str = COMPLETED
    holonomic: bool = False
    input_membership: List[bool] = field(default_factory=list)
    saturation_exponents: List[int] = field(default_factory=list)
    history: List[List[WeylElement]] = field(default_factory=list)
    message: str = ""

    @property
    def basis(self) -> GroebnerBasis:
        sig = self.generators[0].sig if self.generators else None
        return GroebnerBasis(self.generators, self.order, sig, reduced=True)

    @property
    def certified(self) -> bool:
        return all(self.input_membership) and len(self.saturation_exponents) == len(self.generators)


# ---------------------------------------------------------------------------


class _Extender:
    """Caches the normal-ordered powers ``T^i h`` across truncation levels."""

    def __init__(self, H: Sequence[WeylElement], check_monotone: bool = False):
        self.H = list(H)
        self.powers: List[List[WeylElement]] = [[h] for h in self.H]
        self.check = check_monotone

    def _power(self, k: int, i: int) -> WeylElement:
        lst = self.powers[k]
        while len(lst) <= i:
            lst.append(left_multiply_by_T_power(lst[-1], 1))
        return lst[i]

    def upto(self, s: int) -> List[WeylElement]:
        out = []
        for k in range(len(self.H)):
            i = 0
            while True:
                P = self._power(k, i)
                if deg_T(P) > s:
                    break
                out.append(P)
                i += 1
            if self.check:
                for j in (i + 1, i + 2):
                    if deg_T(self._power(k, j)) <= s:
                        raise AssertionError("T-degree of T^i h is not monotone in i")
        return out


def _base_generators(S_gens, sig_T) -> List[WeylElement]:
    H = [WeylElement(sig_T, dict(g.terms)) for g in S_gens if g.terms]
    fT = sig_T.f_element()
    fT = WeylElement(sig_T, {m[:-2] + (1, 0): c for m, c in fT.terms.items()})
    K = sig_T.coeff_field
    for i in range(sig_T.rank):
        v = {m[:-1] + (i,): c for m, c in fT.terms.items()}
        v[(0,) * sig_T.N + (0, i)] = K.neg(K.one)
        H.append(WeylElement(sig_T, v))
    return H


def _as_loc_poly(sig: AlgebraSignature, f) -> MultiPoly:
    ring = sig.loc_ring
    if isinstance(f, MultiPoly):
        if f.ring.names == ring.names and f.ring.field == ring.field:
            return f
        if any(f.ring.names[i] in sig.rational_vars for i in f.variables_used()):
            # a polynomial in K[t, x]: fold t into the coefficients
            from .annihilators import operator_from_function
            return _as_loc_poly(sig, operator_from_function(sig, f))
        from .weyl import _lift_poly
        return _lift_poly(f, ring)
    if isinstance(f, WeylElement):
        if not f.is_T_free() or any(m[sig.nx:-2] != (0,) * (sig.N - sig.nx) for m in f.terms):
            raise ValueError("localization polynomial must be free of derivatives and T")
        return ring.from_dict({m[: sig.nx]: c for m, c in f.terms.items()})
    raise TypeError("f must be a polynomial")


def extend_generators(S_gens: Sequence[WeylElement], f, s: int) -> List[WeylElement]:
    """All normal-ordered ``T^i h`` with T-degree at most ``s``, h in S ∪ {(fT-1) e_i}."""
    if s < 0:
        raise ValueError("s must be non-negative")
    S_gens = [g for g in S_gens if g.terms]
    sig = S_gens[0].sig
    if sig.has_T:
        if any(not g.is_T_free() for g in S_gens):
            raise ValueError("input generators must be T-free")
        sig = sig.without_localization()
    sig_T = sig.localize(_as_loc_poly(sig, f))
    return _Extender(_base_generators(S_gens, sig_T)).upto(s)


def _stable(a: List[WeylElement], b: Optional[List[WeylElement]]) -> bool:
    if b is None or len(a) != len(b):
        return False
    return {frozenset(g.terms.items()) for g in a} == {frozenset(g.terms.items()) for g in b}


def certify(S_gens, Gp: List[WeylElement], f_op: WeylElement, order: ModuleOrder,
            k_max: int = 20, budget: Optional[Budget] = None):
    """Membership certificates for ``S ⊆ <G'> ⊆ S : (f)^inf``.

    Returns ``(input_membership, exponents)``; raises CertificationError if
    some ``f^k g'`` stays outside S for every ``k <= k_max``.
    """
    inputs = [not normal_form(g, Gp, order).terms for g in S_gens if g.terms]
    GS = buchberger([g for g in S_gens if g.terms], order, budget=budget)
    exps = []
    for g in Gp:
        k = saturation_exponent(g, GS.elements, f_op, order, k_max, budget)
        if k is not None:
            exps.append(k)
        else:
            raise CertificationError(
                f"no k <= {k_max} with f^k * g in S for g = {g}"
            )
    return inputs, exps


def partial_weyl_closure(S_gens: Sequence[WeylElement], f: Union[MultiPoly, str, None] = "auto",
                         config: Optional[ClosureConfig] = None) -> ClosureResult:
    """Approximate the partial Weyl closure of the module generated by ``S_gens``.

    ``f`` is a polynomial in the polynomial variables vanishing on the
    singular locus, or ``"auto"`` to compute one.
    """
    config = config or ClosureConfig()
    S_gens = [g for g in S_gens if g.terms]
    if not S_gens:
        raise ValueError("closure of the zero module is not defined")
    sig = S_gens[0].sig
    if sig.has_T or any(g.sig != sig for g in S_gens):
        raise ValueError("input generators must share one T-free signature")
    budget = (config.budget or Budget()).start()
    order = config.order or default_order(sig)
    if not order.eliminate_T:
        raise ValueError("closure needs an order that eliminates T")

    if config.verify_input:
        ok, _ = is_finite_rank(S_gens, sig, budget=budget)
        if not ok:
            raise NotFiniteRankError("input module is not of finite rank")
    if f is None or (isinstance(f, str) and f == "auto"):
        f = pick_loc_poly(singular_locus(S_gens, budget))
    f = _as_loc_poly(sig, f)
    sig_T = sig.localize(f)
    extender = _Extender(_base_generators(S_gens, sig_T), config.check_T_monotone)
    f_op = sig.from_poly(f)

    result = ClosureResult(generators=[], f=f, order=order)
    prev_full: List[WeylElement] = []
    prev_Gp: Optional[List[WeylElement]] = None
    first_hol: Optional[int] = None
    Gp: List[WeylElement] = []
    s = 0
    try:
        while True:
            if s > config.max_T_degree:
                result.status = CAP_HIT
                result.message = f"no stop within T-degree {config.max_T_degree}"
                break
            t0 = time.monotonic()
            gens = extender.upto(s)
            n_gens = len(gens)
            if config.seed_previous:
                gens = gens + prev_full
            G = buchberger(gens, order, budget=budget)
            for g in G:
                lm, _ = leading_term(g, order)
                if lm[-2] == 0 and not g.is_T_free():
                    raise AssertionError("order does not eliminate T")
            Gp = [WeylElement(sig, dict(g.terms)) for g in G if g.is_T_free()]
            hol, wit = is_holonomic(GroebnerBasis(Gp, order, sig, reduced=True))
            stable = _stable(Gp, prev_Gp)
            rec = IterationRecord(s, n_gens, len(G), len(Gp), hol, wit, stable, time.monotonic() - t0)
            result.trace.append(rec)
            if config.keep_history:
                result.history.append(Gp)
            log.info("s=%d gens=%d gb=%d T-free=%d holonomic=%s", s, n_gens, len(G), len(Gp), hol)
            if hol and first_hol is None:
                first_hol = s
            fired = None
            if config.criterion == "holonomic" and hol:
                fired = "holonomic"
            elif config.criterion == "stable-and-holonomic" and hol and stable:
                fired = "stable-and-holonomic"
            elif config.criterion == "holonomic-plus-extra" and first_hol is not None \
                    and s >= first_hol + config.extra:
                fired = config.criterion_label()
            if fired:
                result.fired_criterion = fired
                break
            prev_full = list(G.elements)
            prev_Gp = Gp
            s += 1
    except BudgetExceeded as exc:
        result.status = BUDGET
        result.message = str(exc)
        Gp = prev_Gp or []
    result.generators = Gp
    result.holonomic = bool(result.trace) and result.trace[-1].holonomic and result.status == COMPLETED
    if Gp:
        result.input_membership, result.saturation_exponents = certify(
            S_gens, Gp, f_op, order, config.k_max, budget=None
        )
    return result


def saturation_approx(S_gens, f, config: Optional[ClosureConfig] = None) -> ClosureResult:
    """``S : (f)^inf`` approximated by the same truncated iteration, with ``f`` given."""
    if f is None or isinstance(f, str):
        raise ValueError("saturation_approx needs an explicit polynomial f")
    return partial_weyl_closure(S_gens, f, config)
