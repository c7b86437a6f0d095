"""Buchberger's algorithm for left submodules of free Weyl-algebra modules.

Works for every signature :mod:`wclose.weyl` can describe: Weyl, mixed,
T-extended (as a free module with basis ``T^j e_i``) and commutative.
Multipliers in S-pairs and reductions are T-free scalar monomials, so the
leading term of ``u * g`` is ``u * lm(g)`` with the same coefficient.

The commutative product criterion is deliberately absent: in W_x the pair
(x, Dx) has coprime leading monomials and its S-pair reduces to 1.

Over K(t) the engine works fraction-free: coefficients are kept in K[t],
a reduction step computes ``a*P - c*u*g`` (a = lc(g), c the coefficient
being cancelled, both divided by their gcd) and the polynomial content is
stripped periodically.  Results are converted back to monic form.
"""

from __future__ import annotations

import heapq
import itertools
import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .orders import ModuleOrder, default_order
from .poly import poly_gcd
from .ratfun import RationalFunction
from .weyl import AlgebraSignature, WeylElement, lmul_into, _clean

log = logging.getLogger(__name__)

# strip content every this many fraction-free reduction steps
CONTENT_PERIOD = 16


class BudgetExceeded(RuntimeError):
    """A configured resource cap was hit; ``partial`` holds the basis so far."""

    def __init__(self, message: str, partial=None, stats=None):
        super().__init__(message)
        self.partial = partial or []
        self.stats = stats or {}


@dataclass
class Budget:
    max_pairs: int = 10**6
    max_terms: int = 40_000_000
    timeout: Optional[float] = 1800.0
    max_degree: Optional[int] = None
    max_coeff_bits: Optional[int] = None
    # absolute deadline (time.monotonic); set by start()
    deadline: Optional[float] = field(default=None, repr=False)

    def start(self) -> "Budget":
        if self.timeout is not None and self.deadline is None:
            self.deadline = time.monotonic() + self.timeout
        return self

    def expired(self) -> bool:
        return self.deadline is not None and time.monotonic() > self.deadline


class _Elt:
    __slots__ = ("terms", "lm", "key", "slot", "nz", "cert", "idx")

    def __init__(self, terms, lm, key, N, cert=None, idx=-1):
        self.terms = terms
        self.lm = lm
        self.key = key
        self.slot = lm[N:]
        self.nz = tuple((i, k) for i, k in enumerate(lm[:N]) if k)
        self.cert = cert
        self.idx = idx


class _Reducers:
    """Active reducers grouped by module slot (T-power, position), smallest lm first."""

    def __init__(self):
        self.by_slot: Dict[tuple, List[_Elt]] = {}

    def add(self, e: _Elt):
        lst = self.by_slot.setdefault(e.slot, [])
        lst.append(e)
        lst.sort(key=lambda it: it.key)

    def remove(self, e: _Elt):
        self.by_slot[e.slot].remove(e)

    def find(self, m) -> Optional[_Elt]:
        lst = self.by_slot.get(m[-2:])
        if not lst:
            return None
        for it in lst:
            for i, k in it.nz:
                if m[i] < k:
                    break
            else:
                return it
        return None


def _lead(terms: dict, order: ModuleOrder):
    return max(terms, key=order.key)


def _merge_into(K, terms: dict, tmp: dict, on_new=None):
    for k, v in tmp.items():
        w = terms.get(k)
        if w is None:
            if K.is_zero(v):
                continue
            terms[k] = v
            if on_new is not None:
                on_new(k)
        else:
            w = K.add(w, v)
            if K.is_zero(w):
                del terms[k]
            else:
                terms[k] = w


def _cert_sub(sig, cert, q, u, other_cert):
    """cert -= q * u * other_cert (in place, coefficients in the field)."""
    K = sig.coeff_field
    negq = K.neg(q)
    for gi, ops in other_cert.items():
        tmp: dict = {}
        lmul_into(sig, tmp, negq, u, ops)
        _merge_into(K, cert.setdefault(gi, {}), tmp)


def _cert_scale(K, cert, s):
    if cert is None:
        return None
    return {g: {m: K.mul(s, c) for m, c in ops.items()} for g, ops in cert.items()}


class _PolyCoeffs:
    """K[t] as a coefficient domain (no inverses) for fraction-free work."""

    is_fraction_field = False

    def __init__(self, frac):
        self.frac = frac
        self.base = frac.base
        self.ring = frac.ring
        self.nvars = frac.nvars
        self.zero = self.ring.zero
        self.one = self.ring.one

    add = staticmethod(lambda a, b: a + b)
    sub = staticmethod(lambda a, b: a - b)
    mul = staticmethod(lambda a, b: a * b)
    neg = staticmethod(lambda a: -a)

    def mul_int(self, a, n):
        c = self.base(n)
        return self.zero if self.base.is_zero(c) else a.scale(c)

    @staticmethod
    def is_zero(a):
        return not a.terms

    def is_one(self, a):
        return a.is_constant() and bool(a.terms) and self.base.is_one(a.constant_coeff())

    @staticmethod
    def diff(a, i):
        return a.diff(i)


class _FieldArith:
    """Plain field arithmetic: reducers are monic."""

    ff = False

    def __init__(self, sig: AlgebraSignature, order: ModuleOrder):
        self.sig = sig
        self.order = order
        self.K = sig.coeff_field

    def prepare(self, terms: dict):
        return dict(terms), self.K.one

    def reduce(self, terms, R: _Reducers, full=True, cert=None, budget=None):
        sig, K = self.sig, self.K
        N = sig.N
        rng = range(N)
        nk = self.order.neg_key
        heap = [(nk(m), m) for m in terms]
        heapq.heapify(heap)
        pending = set(terms)
        rem: dict = {}
        steps = 0

        def on_new(k):
            if k not in pending:
                pending.add(k)
                heapq.heappush(heap, (nk(k), k))

        while heap:
            _, m = heapq.heappop(heap)
            pending.discard(m)
            c = terms.get(m)
            if c is None:
                continue
            red = R.find(m)
            if red is None:
                rem[m] = c
                del terms[m]
                if not full:
                    break
                continue
            lm = red.lm
            u = tuple(m[i] - lm[i] for i in rng)
            lc = red.terms[lm]
            q = c if K.is_one(lc) else K.div(c, lc)
            tmp: dict = {}
            lmul_into(sig, tmp, K.neg(q), u, red.terms)
            _merge_into(K, terms, tmp, on_new)
            if cert is not None:
                _cert_sub(sig, cert, q, u, red.cert)
            steps += 1
            if budget is not None and steps % 512 == 0 and budget.expired():
                raise BudgetExceeded("timeout during reduction")
        if not full:
            rem.update(terms)
        return rem, K.one, cert

    def make_elt(self, terms, cert=None, idx=-1) -> _Elt:
        K = self.K
        lm = _lead(terms, self.order)
        lc = terms[lm]
        if not K.is_one(lc):
            inv = K.inv(lc)
            terms = {m: K.mul(inv, c) for m, c in terms.items()}
            cert = _cert_scale(K, cert, inv)
        return _Elt(terms, lm, self.order.key(lm), self.sig.N, cert, idx)

    def spoly(self, a: _Elt, b: _Elt, lcm_exps, certs: bool):
        sig, K = self.sig, self.K
        u1 = tuple(x - y for x, y in zip(lcm_exps, a.lm))
        u2 = tuple(x - y for x, y in zip(lcm_exps, b.lm))
        out: dict = {}
        lmul_into(sig, out, K.one, u1, a.terms)
        lmul_into(sig, out, K.neg(K.one), u2, b.terms)
        cert = None
        if certs:
            cert = {}
            _cert_sub(sig, cert, K.neg(K.one), u1, a.cert)
            _cert_sub(sig, cert, K.one, u2, b.cert)
        return _clean(K, out), cert

    def finalize(self, e: _Elt):
        return e.terms, e.cert

    def elt_from_field(self, terms) -> _Elt:
        t, _ = self.prepare(terms)
        return self.make_elt(t)

    def to_field(self, terms, factor):
        return terms


class _FractionFreeArith(_FieldArith):
    """Coefficients kept in K[t]; see the module docstring."""

    ff = True

    def __init__(self, sig, order):
        super().__init__(sig, order)
        self.P = _PolyCoeffs(self.K)

    def _content(self, *dicts):
        g = None
        vals = sorted((c for d in dicts for c in d.values()), key=lambda p: len(p.terms))
        for c in vals:
            g = c if g is None else poly_gcd(g, c)
            if g.is_constant():
                return None
        return g

    def prepare(self, terms: dict):
        dens = []
        for c in terms.values():
            if not c.den.is_constant() and all(c.den != d for d in dens):
                dens.append(c.den)
        L = self.P.one
        for d in dens:
            g = poly_gcd(L, d)
            L = L * d.exact_div(g)
        out = {}
        for m, c in terms.items():
            out[m] = c.num * L.exact_div(c.den) if not c.den.is_constant() else \
                c.num.scale(self.P.base.inv(c.den.constant_coeff())) * L
        factor = RationalFunction(L, _reduced=True) if dens else self.K.one
        g = self._content(out)
        if g is not None:
            out = {m: c.exact_div(g) for m, c in out.items()}
            factor = factor / RationalFunction(g)
        return out, factor

    def reduce(self, terms, R: _Reducers, full=True, cert=None, budget=None):
        sig, K, P = self.sig, self.K, self.P
        base = P.base
        N = sig.N
        rng = range(N)
        nk = self.order.neg_key
        heap = [(nk(m), m) for m in terms]
        heapq.heapify(heap)
        pending = set(terms)
        rem: dict = {}
        factor = K.one
        steps = 0
        scaled = 0  # non-constant scalings since the last content strip

        def on_new(k):
            if k not in pending:
                pending.add(k)
                heapq.heappush(heap, (nk(k), k))

        while heap:
            _, m = heapq.heappop(heap)
            pending.discard(m)
            c = terms.get(m)
            if c is None:
                continue
            red = R.find(m)
            if red is None:
                rem[m] = c
                del terms[m]
                if not full:
                    break
                continue
            lm = red.lm
            u = tuple(m[i] - lm[i] for i in rng)
            a = red.terms[lm]
            g = poly_gcd(a, c)
            if not g.is_constant():
                a = a.exact_div(g)
                c = c.exact_div(g)
            if a.is_constant():
                q = c.scale(base.inv(a.constant_coeff()))
            else:
                q = c
                for d in (terms, rem):
                    for k in d:
                        d[k] = d[k] * a
                scaled += 1
                ar = RationalFunction(a, _reduced=True)
                factor = K.mul(factor, ar)
                cert = _cert_scale(K, cert, ar) if cert is not None else None
            tmp: dict = {}
            lmul_into(sig, tmp, -q, u, red.terms, K=P)
            _merge_into(P, terms, tmp, on_new)
            if cert is not None:
                _cert_sub(sig, cert, RationalFunction(q), u, red.cert)
            steps += 1
            if scaled and steps % CONTENT_PERIOD == 0:
                factor, cert = self._strip(factor, cert, terms, rem)
                scaled = 0
            if budget is not None and steps % 256 == 0 and budget.expired():
                raise BudgetExceeded("timeout during reduction")
        if not full:
            rem.update(terms)
        factor, cert = self._strip(factor, cert, rem)
        return rem, factor, cert

    def _strip(self, factor, cert, *dicts):
        if not any(dicts):
            return factor, cert
        g = self._content(*dicts)
        if g is None:
            return factor, cert
        for d in dicts:
            for k in d:
                d[k] = d[k].exact_div(g)
        inv = RationalFunction(self.P.one, g)
        return self.K.mul(factor, inv), _cert_scale(self.K, cert, inv)

    def make_elt(self, terms, cert=None, idx=-1) -> _Elt:
        g = self._content(terms)
        if g is not None:
            terms = {m: c.exact_div(g) for m, c in terms.items()}
            cert = _cert_scale(self.K, cert, RationalFunction(self.P.one, g))
        lm = _lead(terms, self.order)
        lc = terms[lm].lc()
        base = self.P.base
        if not base.is_one(lc):
            inv = base.inv(lc)
            terms = {m: c.scale(inv) for m, c in terms.items()}
            cert = _cert_scale(self.K, cert, self.K(inv)) if cert is not None else None
        return _Elt(terms, lm, self.order.key(lm), self.sig.N, cert, idx)

    def spoly(self, a: _Elt, b: _Elt, lcm_exps, certs: bool):
        sig, K, P = self.sig, self.K, self.P
        u1 = tuple(x - y for x, y in zip(lcm_exps, a.lm))
        u2 = tuple(x - y for x, y in zip(lcm_exps, b.lm))
        la, lb = a.terms[a.lm], b.terms[b.lm]
        g = poly_gcd(la, lb)
        ca, cb = lb, la
        if not g.is_constant():
            ca, cb = lb.exact_div(g), la.exact_div(g)
        out: dict = {}
        lmul_into(sig, out, ca, u1, a.terms, K=P)
        lmul_into(sig, out, -cb, u2, b.terms, K=P)
        cert = None
        if certs:
            cert = {}
            _cert_sub(sig, cert, K.neg(RationalFunction(ca)), u1, a.cert)
            _cert_sub(sig, cert, RationalFunction(cb), u2, b.cert)
        return _clean(P, out), cert

    def finalize(self, e: _Elt):
        K = self.K
        inv = RationalFunction(self.P.one, e.terms[e.lm])
        terms = {m: K.mul(inv, RationalFunction(c)) for m, c in e.terms.items()}
        return terms, _cert_scale(K, e.cert, inv)

    def to_field(self, terms, factor):
        K = self.K
        inv = K.inv(factor)
        return {m: K.mul(inv, RationalFunction(c)) for m, c in terms.items()}


def _arith(sig, order) -> _FieldArith:
    if getattr(sig.coeff_field, "is_fraction_field", False):
        return _FractionFreeArith(sig, order)
    return _FieldArith(sig, order)


class GroebnerBasis:
    """A (by default reduced) Gröbner basis together with its order."""

    def __init__(self, elements: Sequence[WeylElement], order: ModuleOrder, sig: AlgebraSignature,
                 reduced: bool = True, stats=None, certificates=None):
        self.elements = list(elements)
        self.order = order
        self.sig = sig
        self.reduced = reduced
        self.stats = stats or {}
        self.certificates = certificates

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def leading_monomials(self):
        return [_lead(g.terms, self.order) for g in self.elements]

    def normal_form(self, P: WeylElement) -> WeylElement:
        return normal_form(P, self.elements, self.order)

    def contains(self, P: WeylElement) -> bool:
        return module_membership(P, self)

    def __repr__(self):
        return f"GroebnerBasis({len(self.elements)} elements, reduced={self.reduced})"


def _check_inputs(elements: Sequence[WeylElement]) -> AlgebraSignature:
    sig = elements[0].sig
    for g in elements:
        if g.sig is not sig and g.sig != sig:
            raise ValueError("generators live in different signatures")
    return sig


def _reducer_set(arith, G, sig) -> _Reducers:
    R = _Reducers()
    for g in G:
        if g.sig is not sig and g.sig != sig:
            raise ValueError("signature mismatch between element and basis")
        if not g.terms:
            raise ValueError("zero element in reducer list")
        R.add(arith.elt_from_field(g.terms))
    return R


def normal_form(P: WeylElement, G: Sequence[WeylElement], order: Optional[ModuleOrder] = None) -> WeylElement:
    """Full reduction of ``P`` modulo the leading terms of ``G``.

    Reducer choice: the largest reducible monomial is treated first, by the
    applicable reducer with the smallest leading monomial.  The result R
    satisfies ``P - R`` in the module generated by ``G``.
    """
    sig = P.sig
    order = order or default_order(sig)
    arith = _arith(sig, order)
    R = _reducer_set(arith, G, sig)
    if not P.terms:
        return P
    terms, f0 = arith.prepare(P.terms)
    rem, f1, _ = arith.reduce(terms, R)
    if not rem:
        return sig.zero()
    return WeylElement(sig, arith.to_field(rem, sig.coeff_field.mul(f0, f1)))


def saturation_exponent(P: WeylElement, G: Sequence[WeylElement], f: WeylElement,
                        order: Optional[ModuleOrder] = None, k_max: int = 20,
                        budget: Optional[Budget] = None) -> Optional[int]:
    """Least ``k <= k_max`` with ``f^k P`` in the module of the Gröbner basis ``G``.

    The module is a left module, so ``f^k P`` reduces to zero iff ``f`` times
    the remainder of ``f^(k-1) P`` does; only remainders are ever multiplied.
    Scalar factors are irrelevant to the zero test and are dropped.
    """
    sig = P.sig
    order = order or default_order(sig)
    arith = _arith(sig, order)
    R = _reducer_set(arith, G, sig)
    if not f.is_scalar() or not f.is_T_free():
        raise ValueError("f must be a T-free scalar operator")
    dom = arith.P if arith.ff else arith.K
    f_terms, _ = arith.prepare(f.terms)
    f_terms = [(m[: sig.N], c) for m, c in f_terms.items()]
    terms, _ = arith.prepare(P.terms)
    for k in range(k_max + 1):
        if not terms:
            return k
        rem, _, _ = arith.reduce(terms, R, budget=budget)
        if not rem:
            return k
        if k == k_max:
            break
        terms = {}
        for u, c in f_terms:
            lmul_into(sig, terms, c, u, rem, K=dom)
        terms = _clean(dom, terms)
    return None


def s_pair(g1: WeylElement, g2: WeylElement, order: Optional[ModuleOrder] = None) -> Optional[WeylElement]:
    """``u1 g1 / lc1 - u2 g2 / lc2``, or None if the leading positions differ."""
    sig = g1.sig
    order = order or default_order(sig)
    N = sig.N
    K = sig.coeff_field
    m1, m2 = _lead(g1.terms, order), _lead(g2.terms, order)
    if m1[N:] != m2[N:]:
        return None
    lcm = tuple(max(a, b) for a, b in zip(m1[:N], m2[:N]))
    u1 = tuple(a - b for a, b in zip(lcm, m1[:N]))
    u2 = tuple(a - b for a, b in zip(lcm, m2[:N]))
    out: dict = {}
    lmul_into(sig, out, K.inv(g1.terms[m1]), u1, g1.terms)
    lmul_into(sig, out, K.neg(K.inv(g2.terms[m2])), u2, g2.terms)
    return WeylElement(sig, _clean(K, out))


def buchberger(gens: Sequence[WeylElement], order: Optional[ModuleOrder] = None,
               budget: Optional[Budget] = None, certificates: bool = False) -> GroebnerBasis:
    """Reduced Gröbner basis of the left module generated by ``gens``.

    With ``certificates`` every output element carries an explicit
    representation ``sum_k a_k * gens[k]`` (``a_k`` scalar operators).
    """
    gens = list(gens)
    nonzero = [(k, g) for k, g in enumerate(gens) if g.terms]
    if not nonzero:
        sig = gens[0].sig if gens else None
        return GroebnerBasis([], order, sig, reduced=True, stats={"pairs": 0}, certificates=[] if certificates else None)
    sig = _check_inputs([g for _, g in nonzero])
    order = order or default_order(sig)
    budget = (budget or Budget()).start()
    arith = _arith(sig, order)
    K = sig.coeff_field
    N = sig.N
    t0 = time.monotonic()
    stats = {"pairs": 0, "zero_reductions": 0, "chain_skipped": 0, "inputs": len(nonzero)}

    items: List[_Elt] = []
    active: List[int] = []
    R = _Reducers()
    pairs: Dict[Tuple[int, int], tuple] = {}
    heap: list = []
    counter = itertools.count()
    total_terms = 0

    def lcm_of(a: _Elt, b: _Elt):
        return tuple(max(x, y) for x, y in zip(a.lm[:N], b.lm[:N]))

    def divides(a_exps, b_exps):
        for x, y in zip(a_exps, b_exps):
            if x > y:
                return False
        return True

    def partial():
        out = []
        for i in active:
            t, _ = arith.finalize(items[i])
            out.append(WeylElement(sig, dict(t)))
        return out

    def add_element(terms, cert):
        nonlocal total_terms
        h = arith.make_elt(terms, cert, idx=len(items))
        if budget.max_degree is not None and max(sum(m[:N]) for m in h.terms) > budget.max_degree:
            raise BudgetExceeded("degree cap exceeded", partial(), stats)
        if budget.max_coeff_bits is not None:
            bits = max(_bits(arith, c) for c in h.terms.values())
            if bits > budget.max_coeff_bits:
                raise BudgetExceeded("coefficient size cap exceeded", partial(), stats)
        total_terms += len(h.terms)
        if total_terms > budget.max_terms:
            raise BudgetExceeded("term budget exceeded", partial(), stats)
        items.append(h)
        hi = h.idx
        hx = h.lm[:N]
        # Gebauer-Moller update without the product criterion
        cand = []
        for gi in active:
            g = items[gi]
            if g.slot == h.slot:
                cand.append((gi, lcm_of(g, h)))
        kept = []
        for idx_c, (gi, L) in enumerate(cand):
            redundant = False
            for _, L2 in itertools.chain(cand[idx_c + 1:], kept):
                if divides(L2, L):
                    redundant = True
                    break
            if not redundant:
                kept.append((gi, L))
        stats["chain_skipped"] += len(cand) - len(kept)
        for (a, b), L in list(pairs.items()):
            if items[a].slot != h.slot:
                continue
            if divides(hx, L):
                if lcm_of(items[a], h) != L and lcm_of(items[b], h) != L:
                    del pairs[(a, b)]
                    stats["chain_skipped"] += 1
        for gi, L in kept:
            pairs[(gi, hi)] = L
            heapq.heappush(heap, (order.key(L + h.slot), next(counter), gi, hi))
        still = []
        for gi in active:
            if items[gi].slot == h.slot and divides(hx, items[gi].lm[:N]):
                R.remove(items[gi])
            else:
                still.append(gi)
        still.append(hi)
        active[:] = still
        R.add(h)

    zero_mono = (0,) * (N + 2)
    for k, g in nonzero:
        terms, f0 = arith.prepare(g.terms)
        cert = None
        if certificates:
            cert = {k: {zero_mono: K.mul(K.one, f0)}}
        r, _, cert = arith.reduce(terms, R, cert=cert, budget=budget)
        if r:
            add_element(r, cert)

    while heap:
        _, _, a, b = heapq.heappop(heap)
        L = pairs.pop((a, b), None)
        if L is None:
            continue
        stats["pairs"] += 1
        if stats["pairs"] > budget.max_pairs:
            raise BudgetExceeded("pair budget exceeded", partial(), stats)
        if budget.expired():
            raise BudgetExceeded("timeout", partial(), stats)
        sp, cert = arith.spoly(items[a], items[b], L, certificates)
        if not sp:
            stats["zero_reductions"] += 1
            continue
        r, _, cert = arith.reduce(sp, R, cert=cert, budget=budget)
        if r:
            add_element(r, cert)
        else:
            stats["zero_reductions"] += 1

    basis = _interreduce_elts(arith, [items[i] for i in active], certificates)
    stats["size"] = len(basis)
    stats["time"] = time.monotonic() - t0
    elements, certs = [], [] if certificates else None
    for e in basis:
        t, c = arith.finalize(e)
        elements.append(WeylElement(sig, t))
        if certificates:
            certs.append({gi: WeylElement(sig, ops) for gi, ops in c.items() if ops})
    return GroebnerBasis(elements, order, sig, reduced=True, stats=stats, certificates=certs)


def _bits(arith, c) -> int:
    if arith.ff:
        return sum(arith.P.base.bit_size(v) for v in c.terms.values())
    return arith.K.bit_size(c)


def _interreduce_elts(arith, elts: List[_Elt], certificates=False) -> List[_Elt]:
    """Tail-reduce a list with pairwise non-divisible leading monomials."""
    elts = sorted(elts, key=lambda e: e.key)
    out = []
    for i, e in enumerate(elts):
        R = _Reducers()
        for j, o in enumerate(elts):
            if j != i:
                R.add(o)
        cert = None
        if certificates:
            cert = {g: dict(ops) for g, ops in e.cert.items()}
        r, _, cert = arith.reduce(dict(e.terms), R, cert=cert)
        out.append(arith.make_elt(r, cert, e.idx))
    # tails were reduced against the pre-reduction versions; those have the
    # same leading monomials, so one pass gives a reduced basis
    return out


def interreduce(G: Sequence[WeylElement], order: Optional[ModuleOrder] = None) -> List[WeylElement]:
    """Mutually reduce ``G``: non-divisible leading monomials, reduced tails, monic."""
    G = [g for g in G if g.terms]
    if not G:
        return []
    sig = _check_inputs(G)
    order = order or default_order(sig)
    arith = _arith(sig, order)
    elts = [arith.elt_from_field(g.terms) for g in G]
    changed = True
    while changed:
        changed = False
        elts.sort(key=lambda e: e.key)
        for i, e in enumerate(elts):
            R = _Reducers()
            for j, o in enumerate(elts):
                if j != i:
                    R.add(o)
            r, _, _ = arith.reduce(dict(e.terms), R)
            if r and arith.make_elt(dict(r)).terms == e.terms:
                continue
            changed = True
            if r:
                elts[i] = arith.make_elt(r)
            else:
                del elts[i]
            break
    elts.sort(key=lambda e: e.key)
    return [WeylElement(sig, arith.finalize(e)[0]) for e in elts]


def module_membership(P: WeylElement, G: GroebnerBasis) -> bool:
    """True iff ``P`` reduces to zero modulo the Gröbner basis ``G``."""
    if not P.terms:
        return True
    return not normal_form(P, G.elements, G.order).terms


def groebner_basis(gens, order=None, **kw) -> GroebnerBasis:
    return buchberger(gens, order, **kw)


def rationalize(gens: Sequence[WeylElement], sig: AlgebraSignature):
    """Move every base variable into the coefficient field.

    Returns ``(sig_r, gens_r)`` where ``sig_r`` has no polynomial variables;
    its monomial variables are the derivatives only.
    """
    from .ratfun import RationalFunction

    if sig.has_T:
        raise ValueError("rationalization is defined for T-free signatures")
    flagged = [v for v, s in zip(sig.poly_vars, sig.dx_slot) if s is not None]
    flagged += [v for v, s in zip(sig.rational_vars, sig.dt_slot) if s is not None]
    sig_r = AlgebraSignature(
        (), sig.rational_vars + sig.poly_vars, field=sig.base_field, rank=sig.rank,
        derivatives=flagged, deriv_names=sig.deriv_names,
    )
    Kr = sig_r.coeff_field
    R = Kr.ring
    slot_map = [sig_r.slot_names.index(sig.slot_names[s]) for s in sig.deriv_slots]
    x_idx = [R.index(v) for v in sig.poly_vars]
    out = []
    for g in gens:
        if g.sig != sig:
            raise ValueError("generator from a different signature")
        terms: dict = {}
        for m, c in g.terms.items():
            if isinstance(c, RationalFunction):
                cf = RationalFunction(R.convert(c.num), R.convert(c.den))
            else:
                cf = Kr(c)
            mono = [0] * R.nvars
            for i, k in zip(x_idx, m[: sig.nx]):
                mono[i] = k
            cf = cf * RationalFunction(R.monomial(tuple(mono)), _reduced=True)
            e = [0] * sig_r.N
            for s, t in zip(sig.deriv_slots, slot_map):
                e[t] = m[s]
            key = tuple(e) + (0, m[-1])
            v = terms.get(key)
            terms[key] = cf if v is None else v + cf
        out.append(WeylElement(sig_r, _clean(Kr, terms)))
    return sig_r, out


def staircase_size(G: GroebnerBasis) -> Optional[int]:
    """Number of standard monomials (summed over positions), or None if infinite."""
    sig = G.sig
    N = sig.N
    lms = [_lead(g.terms, G.order) for g in G.elements]
    if any(m[N] for m in lms):
        raise ValueError("staircase of a T-extended basis is not defined")
    total = 0
    for p in range(sig.rank):
        here = [m[:N] for m in lms if m[N + 1] == p]
        if any(not any(m) for m in here):
            continue
        bounds = []
        for s in range(N):
            pure = [m[s] for m in here if m[s] and sum(m) == m[s]]
            if not pure:
                return None
            bounds.append(min(pure))
        for e in itertools.product(*(range(b) for b in bounds)):
            if not any(all(a >= b for a, b in zip(e, m)) for m in here):
                total += 1
    return total


def is_finite_rank(S_gens: Sequence[WeylElement], sig: Optional[AlgebraSignature] = None,
                   budget: Optional[Budget] = None) -> Tuple[bool, Optional[int]]:
    """Finite-rank test over the fully rational Weyl algebra K(t,x)<D>."""
    S_gens = list(S_gens)
    if sig is None:
        if not S_gens:
            raise ValueError("signature needed for an empty generator list")
        sig = S_gens[0].sig
    sig_r, gens_r = rationalize(S_gens, sig)
    order = default_order(sig_r)
    G = buchberger(gens_r, order, budget=budget) if any(g.terms for g in gens_r) else \
        GroebnerBasis([], order, sig_r)
    n = staircase_size(G)
    return (n is not None), n
