"""Normal-ordered arithmetic in free modules over mixed Weyl algebras.

A term ``c * x^a * D^b * T^j * e_i`` is stored as the monomial tuple
``(a_1, ..., a_n, b_1, ..., b_k, j, i)`` mapped to its coefficient ``c``.
Coefficients live in K (no rational variables) or in K(t).  The exponent
slots are the polynomial variables followed by the derivatives that are
present (first those of the polynomial variables, then those of the
rational variables).  The last two slots hold the power of the
localization variable ``T`` and the 0-based position.

Because ``T`` sits to the right of every derivative, left multiplication by
``T``-free operators never needs the ``T`` commutation rule: the
``T``-extended module is a free module with basis ``T^j e_i``.
"""

from __future__ import annotations

import itertools
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .fields import QQ, SignatureMismatch
from .poly import MultiPoly, PolyRing, _join_terms, poly_gcd
from .ratfun import FractionField, RationalFunction

Monomial = Tuple[int, ...]


class AlgebraSignature:
    """Variables, derivatives, rank and optional localization of a Weyl module.

    ``derivatives`` lists the base variables carrying a derivative (default:
    all of them).  With no derivatives at all the signature describes a
    commutative polynomial ring, which is how the symbol ring is modelled.
    ``localization`` is ``f`` in K(t)[x]; it adds the variable ``T`` = 1/f.
    """

    def __init__(
        self,
        poly_vars: Sequence[str] = (),
        rational_vars: Sequence[str] = (),
        field=QQ,
        rank: int = 1,
        derivatives: Optional[Iterable[str]] = None,
        localization=None,
        T_name: str = "T",
        deriv_names: Optional[Dict[str, str]] = None,
    ):
        self.poly_vars = tuple(poly_vars)
        self.rational_vars = tuple(rational_vars)
        base_names = self.poly_vars + self.rational_vars
        if len(set(base_names)) != len(base_names):
            raise ValueError(f"variable names must be distinct: {base_names}")
        if rank < 1:
            raise ValueError("module rank must be >= 1")
        self.base_field = field
        self.rank = rank
        self.coeff_field = FractionField(field, self.rational_vars) if self.rational_vars else field
        if derivatives is None:
            derivatives = base_names
        derivatives = set(derivatives)
        unknown = derivatives - set(base_names)
        if unknown:
            raise ValueError(f"derivatives of undeclared variables: {sorted(unknown)}")
        self.deriv_names = dict(deriv_names or {})

        self.nx = len(self.poly_vars)
        names = list(self.poly_vars)
        self.dx_slot: List[Optional[int]] = []
        self.weyl_pairs: List[Tuple[int, int]] = []
        for i, v in enumerate(self.poly_vars):
            if v in derivatives:
                self.dx_slot.append(len(names))
                self.weyl_pairs.append((i, len(names)))
                names.append(self.deriv_names.get(v, "D" + v))
            else:
                self.dx_slot.append(None)
        self.dt_slot: List[Optional[int]] = []
        self.t_pairs: List[Tuple[int, int]] = []
        for j, v in enumerate(self.rational_vars):
            if v in derivatives:
                self.dt_slot.append(len(names))
                self.t_pairs.append((j, len(names)))
                names.append(self.deriv_names.get(v, "D" + v))
            else:
                self.dt_slot.append(None)
        self.slot_names = tuple(names)
        self.N = len(names)
        self.T_slot = self.N
        self.pos_slot = self.N + 1
        self.deriv_slots = tuple(range(self.nx, self.N))
        all_names = base_names + self.slot_names[self.nx:]
        if len(set(all_names)) != len(all_names):
            raise ValueError(f"derivative names clash with variables: {all_names}")

        self.T_name = T_name
        self.localization: Optional[MultiPoly] = None
        self._f_terms: Dict[Monomial, object] = {}
        self._f_partials: Dict[int, Dict[Monomial, object]] = {}
        if localization is not None:
            self._set_localization(localization)
        self._T_memo: Dict[Monomial, Dict[Monomial, object]] = {}

    # -- identity --------------------------------------------------------
    def _descriptor(self):
        loc = None
        if self.localization is not None:
            loc = tuple(sorted((e, str(c)) for e, c in self.localization.terms.items()))
        return (
            self.poly_vars,
            self.rational_vars,
            self.base_field,
            self.rank,
            self.slot_names,
            loc,
            self.T_name,
        )

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, AlgebraSignature) and self._descriptor() == other._descriptor()

    def __hash__(self):
        return hash(self._descriptor())

    def __repr__(self):
        parts = [f"poly={list(self.poly_vars)}"]
        if self.rational_vars:
            parts.append(f"rational={list(self.rational_vars)}")
        parts.append(f"field={self.base_field!r}")
        if self.rank > 1:
            parts.append(f"rank={self.rank}")
        if self.localization is not None:
            parts.append(f"{self.T_name}=1/({self.localization})")
        return f"AlgebraSignature({', '.join(parts)})"

    @property
    def is_commutative(self) -> bool:
        return self.N == self.nx and self.localization is None

    @property
    def has_T(self) -> bool:
        return self.localization is not None

    @property
    def loc_ring(self) -> PolyRing:
        """K(t)[x], the home of the localization polynomial."""
        return PolyRing(self.coeff_field, self.poly_vars)

    @property
    def function_ring(self) -> PolyRing:
        """K[t, x], numerators/denominators of functions acted upon."""
        return PolyRing(self.base_field, self.rational_vars + self.poly_vars)

    def derivative_name(self, var: str) -> str:
        return self.deriv_names.get(var, "D" + var)

    def variant(self, **changes) -> "AlgebraSignature":
        """A copy of this signature with some constructor arguments replaced."""
        derivs = [v for v, s in zip(self.poly_vars, self.dx_slot) if s is not None]
        derivs += [v for v, s in zip(self.rational_vars, self.dt_slot) if s is not None]
        kw = dict(
            poly_vars=self.poly_vars,
            rational_vars=self.rational_vars,
            field=self.base_field,
            rank=self.rank,
            derivatives=derivs,
            localization=self.localization,
            T_name=self.T_name,
            deriv_names=self.deriv_names,
        )
        kw.update(changes)
        return AlgebraSignature(**kw)

    def localize(self, f) -> "AlgebraSignature":
        return self.variant(localization=f)

    def without_localization(self) -> "AlgebraSignature":
        return self.variant(localization=None)

    def _set_localization(self, f):
        ring = self.loc_ring
        if isinstance(f, MultiPoly):
            if f.ring.names != ring.names:
                f = ring.convert(f) if f.ring.field == ring.field else _lift_poly(f, ring)
            elif f.ring.field != ring.field:
                f = _lift_poly(f, ring)
        else:
            raise TypeError("localization polynomial must be a MultiPoly in the polynomial variables")
        if not f.terms:
            raise ValueError("localization polynomial must be nonzero")
        if self.T_name in self.slot_names or self.T_name in self.rational_vars:
            raise ValueError(f"T name {self.T_name!r} clashes with a variable")
        self.localization = f
        N = self.N
        K = self.coeff_field

        def to_mono(e):
            m = [0] * (N + 2)
            m[: self.nx] = e
            return tuple(m)

        self._f_terms = {to_mono(e): c for e, c in f.terms.items()}
        for i, slot in enumerate(self.dx_slot):
            if slot is not None:
                self._f_partials[slot] = {to_mono(e): c for e, c in f.diff(i).terms.items()}
        for j, slot in enumerate(self.dt_slot):
            if slot is not None:
                d = {}
                for e, c in f.terms.items():
                    dc = K.diff(c, j)
                    if not K.is_zero(dc):
                        d[to_mono(e)] = dc
                self._f_partials[slot] = d

    # -- element construction --------------------------------------------
    def zero(self) -> "WeylElement":
        return WeylElement(self, {})

    def one(self, position: int = 0) -> "WeylElement":
        return self.unit_vector(position)

    def unit_vector(self, position: int) -> "WeylElement":
        if not 0 <= position < self.rank:
            raise ValueError(f"position {position} outside rank {self.rank}")
        m = [0] * (self.N + 2)
        m[-1] = position
        return WeylElement(self, {tuple(m): self.coeff_field.one})

    def monomial(self, exps: Sequence[int], coeff=None, T: int = 0, position: int = 0) -> "WeylElement":
        exps = tuple(exps)
        if len(exps) != self.N:
            raise ValueError(f"expected {self.N} exponents, got {len(exps)}")
        if T and not self.has_T:
            raise ValueError("signature has no localization variable")
        c = self.coeff_field.one if coeff is None else self.coerce_coeff(coeff)
        return WeylElement(self, {} if self.coeff_field.is_zero(c) else {exps + (T, position): c})

    def coerce_coeff(self, c):
        K = self.coeff_field
        if isinstance(c, (RationalFunction, MultiPoly)) and getattr(K, "is_fraction_field", False):
            return K(c)
        if isinstance(c, (RationalFunction, MultiPoly)):
            raise SignatureMismatch("function coefficient in a signature without rational variables")
        return K(c)

    def constant(self, c, position: int = 0) -> "WeylElement":
        return self.monomial((0,) * self.N, c, position=position)

    def gen(self, name: str) -> "WeylElement":
        """Generator by name: polynomial variable, derivative, rational variable or T."""
        if name in self.slot_names:
            e = [0] * self.N
            e[self.slot_names.index(name)] = 1
            return self.monomial(e)
        if name in self.rational_vars:
            return self.constant(self.coeff_field.gen(name))
        if self.has_T and name == self.T_name:
            return self.monomial((0,) * self.N, T=1)
        raise KeyError(f"unknown generator {name!r}")

    def from_poly(self, p: MultiPoly, position: int = 0) -> "WeylElement":
        """Embed a polynomial in the polynomial variables (coefficients in K or K(t))."""
        ring = p.ring
        idx = [self.poly_vars.index(n) for n in ring.names]
        K = self.coeff_field
        out = {}
        for e, c in p.terms.items():
            m = [0] * (self.N + 2)
            for j, k in zip(idx, e):
                m[j] += k
            m[-1] = position
            out[tuple(m)] = c if ring.field == K else K(c)
        return WeylElement(self, out)

    def embed(self, P: "WeylElement") -> "WeylElement":
        """Re-home ``P`` in this signature (identical slot layout required)."""
        if P.sig == self:
            return P
        if P.sig.N != self.N or P.sig.coeff_field != self.coeff_field:
            raise SignatureMismatch(f"cannot embed {P.sig} into {self}")
        for m in P.terms:
            if m[-2] and not self.has_T:
                raise SignatureMismatch("element involves T")
            if m[-1] >= self.rank:
                raise SignatureMismatch("position outside rank")
        return WeylElement(self, dict(P.terms))

    def f_element(self) -> "WeylElement":
        if not self.has_T:
            raise ValueError("signature has no localization")
        return WeylElement(self, dict(self._f_terms))


def _lift_poly(p: MultiPoly, ring: PolyRing) -> MultiPoly:
    """Coerce a polynomial over K into ``ring`` (whose field may be K(t))."""
    K = ring.field
    idx = [ring.index(n) for n in p.ring.names]
    out = {}
    for e, c in p.terms.items():
        ne = [0] * ring.nvars
        for j, k in zip(idx, e):
            ne[j] += k
        out[tuple(ne)] = K(c)
    return ring.from_dict(out)


# ---------------------------------------------------------------------------
# kernels on raw term dictionaries


def lmul_into(sig: AlgebraSignature, out: dict, c, u: Sequence[int], terms: dict, K=None) -> None:
    """``out += c * u * terms`` for a T-free scalar monomial ``u`` (Leibniz rule).

    ``K`` overrides the coefficient domain (the Gröbner engine passes the
    polynomial ring K[t] when it works fraction-free).
    """
    K = K or sig.coeff_field
    add, mul, mul_int, is_zero = K.add, K.mul, K.mul_int, K.is_zero
    N = sig.N
    xd = [(xs, ds, u[ds]) for xs, ds in sig.weyl_pairs if u[ds]]
    td = [(tj, ds, u[ds]) for tj, ds in sig.t_pairs if u[ds]] if K.nvars else []
    rng = range(N)
    for m, a in terms.items():
        base = [m[i] + u[i] for i in rng]
        base.append(m[N])
        base.append(m[N + 1])
        opts = []
        for xs, ds, b in xd:
            al = m[xs]
            if al:
                row = []
                fall = 1
                for k in range(min(al, b) + 1):
                    row.append((k, comb(b, k) * fall, xs, ds))
                    fall *= al - k
                opts.append(row)
        ca = mul(c, a)
        if not opts and not td:
            key = tuple(base)
            v = out.get(key)
            out[key] = ca if v is None else add(v, ca)
            continue
        topts = [[(k, comb(b, k), tj, ds) for k in range(b + 1)] for tj, ds, b in td]
        derivs = {}
        for combo in itertools.product(*opts, *topts):
            e = list(base)
            factor = 1
            dorders = []
            for idx, (k, f, vs, ds) in enumerate(combo):
                if not k:
                    continue
                factor *= f
                e[ds] -= k
                if idx < len(opts):
                    e[vs] -= k
                else:
                    dorders.append((vs, k))
            if dorders:
                key_d = tuple(dorders)
                coef = derivs.get(key_d)
                if coef is None:
                    coef = a
                    for tj, k in dorders:
                        for _ in range(k):
                            coef = K.diff(coef, tj)
                    derivs[key_d] = coef
                if is_zero(coef):
                    continue
                coef = mul(c, coef)
            else:
                coef = ca
            if factor != 1:
                coef = mul_int(coef, factor)
                if is_zero(coef):
                    continue
            key = tuple(e)
            v = out.get(key)
            out[key] = coef if v is None else add(v, coef)


def _clean(K, d: dict) -> dict:
    is_zero = K.is_zero
    return {m: c for m, c in d.items() if not is_zero(c)}


def _cmul_into(sig, out: dict, poly_terms: dict, terms: dict) -> None:
    """``out += p * terms`` where ``p`` is a polynomial in the x's (commutes on the left)."""
    K = sig.coeff_field
    add, mul = K.add, K.mul
    for pm, pc in poly_terms.items():
        for m, a in terms.items():
            key = tuple(x + y for x, y in zip(m, pm))
            v = out.get(key)
            c = mul(pc, a)
            out[key] = c if v is None else add(v, c)


def _T_of_derivs(sig: AlgebraSignature, beta: Monomial) -> dict:
    """Normal form of ``T * D^beta`` (beta a full monomial with only D slots set)."""
    memo = sig._T_memo
    hit = memo.get(beta)
    if hit is not None:
        return hit
    N = sig.N
    K = sig.coeff_field
    if not any(beta):
        res = {(0,) * N + (1, 0): K.one}
    else:
        l = next(i for i in sig.deriv_slots if beta[i])
        prev = list(beta)
        prev[l] -= 1
        A = _T_of_derivs(sig, tuple(prev))
        # T D_l = D_l T + f_l T^2
        out: dict = {}
        u = [0] * N
        u[l] = 1
        lmul_into(sig, out, K.one, u, A)
        fl = sig._f_partials.get(l)
        if fl:
            _cmul_into(sig, out, fl, _T_left(sig, A))
        res = _clean(K, out)
    memo[beta] = res
    return res


def _T_left(sig: AlgebraSignature, terms: dict) -> dict:
    """Normal form of ``T * terms``."""
    K = sig.coeff_field
    N = sig.N
    nx = sig.nx
    add, mul = K.add, K.mul
    out: dict = {}
    for m, a in terms.items():
        beta = (0,) * nx + m[nx:N] + (0, 0)
        Nb = _T_of_derivs(sig, beta)
        j, pos = m[N], m[N + 1]
        for bm, bc in Nb.items():
            key = tuple(m[i] + bm[i] if i < nx else bm[i] for i in range(N)) + (bm[N] + j, pos)
            c = mul(a, bc)
            v = out.get(key)
            out[key] = c if v is None else add(v, c)
    return _clean(K, out)


def _left_term_action(sig: AlgebraSignature, m: Monomial, c, terms: dict) -> dict:
    """``c * x^a * D^b * T^j`` applied on the left of ``terms``."""
    N = sig.N
    cur = terms
    for _ in range(m[N]):
        cur = _T_left(sig, cur)
    out: dict = {}
    lmul_into(sig, out, c, m[:N], cur)
    return out


# ---------------------------------------------------------------------------


class WeylElement:
    """Element of a free module over a (mixed, possibly T-extended) Weyl algebra."""

    __slots__ = ("sig", "terms")

    def __init__(self, sig: AlgebraSignature, terms: Dict[Monomial, object]):
        self.sig = sig
        self.terms = terms

    # -- protocol ----------------------------------------------------------
    def _other(self, other):
        if isinstance(other, WeylElement):
            if other.sig is not self.sig and other.sig != self.sig:
                raise SignatureMismatch(f"{self.sig} vs {other.sig}")
            return other
        try:
            return self.sig.constant(other)
        except (TypeError, ValueError, SignatureMismatch):
            return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, WeylElement):
            if isinstance(other, int):
                return self == self.sig.constant(other)
            return NotImplemented
        return self.sig == other.sig and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        K = self.sig.coeff_field
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = K.add(v, c)
                if K.is_zero(v):
                    del out[m]
                else:
                    out[m] = v
        return WeylElement(self.sig, out)

    __radd__ = __add__

    def __neg__(self):
        K = self.sig.coeff_field
        return WeylElement(self.sig, {m: K.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, WeylElement):
            return multiply(self, other)
        other_el = self._other(other)
        if other_el is NotImplemented:
            return other_el
        return multiply(self, other_el)

    def __rmul__(self, other):
        other_el = self._other(other)
        if other_el is NotImplemented:
            return other_el
        return multiply(other_el, self)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        r = self.sig.one()
        for _ in range(n):
            r = r * self
        return r

    def scale(self, c) -> "WeylElement":
        """Multiply every coefficient by ``c`` (on the left)."""
        K = self.sig.coeff_field
        c = self.sig.coerce_coeff(c)
        if K.is_zero(c):
            return self.sig.zero()
        return WeylElement(self.sig, {m: K.mul(c, v) for m, v in self.terms.items()})

    # -- structure ---------------------------------------------------------
    def positions(self) -> set:
        return {m[-1] for m in self.terms}

    def is_scalar(self) -> bool:
        return all(m[-1] == 0 for m in self.terms)

    def is_T_free(self) -> bool:
        return all(m[-2] == 0 for m in self.terms)

    def component(self, i: int) -> "WeylElement":
        """The operator in position ``i``, moved to position 0."""
        return WeylElement(
            self.sig, {m[:-1] + (0,): c for m, c in self.terms.items() if m[-1] == i}
        )

    def to_position(self, i: int) -> "WeylElement":
        if not self.is_scalar():
            raise ValueError("element is already a module element")
        if not 0 <= i < self.sig.rank:
            raise ValueError(f"position {i} outside rank {self.sig.rank}")
        return WeylElement(self.sig, {m[:-1] + (i,): c for m, c in self.terms.items()})

    def derivative_degree(self) -> int:
        if not self.terms:
            raise ValueError("zero element has no degree")
        ds = self.sig.deriv_slots
        return max(sum(m[i] for i in ds) for m in self.terms)

    def to_str(self, order=None) -> str:
        return format_element(self, order)

    __str__ = to_str

    def __repr__(self):
        return f"WeylElement({self.to_str()!r})"


def vector(sig: AlgebraSignature, components: Sequence) -> WeylElement:
    """Build ``sum_i components[i] * e_i`` from scalar operators."""
    if len(components) != sig.rank:
        raise ValueError(f"expected {sig.rank} components, got {len(components)}")
    out = sig.zero()
    for i, c in enumerate(components):
        if not isinstance(c, WeylElement):
            c = sig.constant(c)
        if c.terms:
            out = out + c.to_position(i)
    return out


def multiply(P: WeylElement, Q: WeylElement) -> WeylElement:
    """Normal-ordered product ``P * Q``.

    At most one operand may be a module element; if ``P`` is the module
    element then ``Q`` acts componentwise from the right.
    """
    if P.sig is not Q.sig and P.sig != Q.sig:
        raise SignatureMismatch(f"{P.sig} vs {Q.sig}")
    sig = P.sig
    K = sig.coeff_field
    if not P.terms or not Q.terms:
        return sig.zero()
    if not P.is_scalar():
        if not Q.is_scalar():
            raise ValueError("product of two module elements is undefined")
        out = sig.zero()
        for i in sorted(P.positions()):
            out = out + multiply(P.component(i), Q).to_position(i)
        return out
    acc: dict = {}
    for m, c in P.terms.items():
        part = _left_term_action(sig, m, c, Q.terms)
        for k, v in part.items():
            w = acc.get(k)
            acc[k] = v if w is None else K.add(w, v)
    return WeylElement(sig, _clean(K, acc))


def lmul_monomial(P: WeylElement, exps: Sequence[int], c=None) -> WeylElement:
    """``c * x^a D^b * P`` for a T-free scalar monomial."""
    sig = P.sig
    K = sig.coeff_field
    out: dict = {}
    lmul_into(sig, out, K.one if c is None else c, tuple(exps), P.terms)
    return WeylElement(sig, _clean(K, out))


def left_multiply_by_T_power(P: WeylElement, i: int) -> WeylElement:
    """Normal-ordered ``T^i * P``."""
    sig = P.sig
    if not sig.has_T:
        raise ValueError("signature has no localization variable")
    if i < 0:
        raise ValueError("T power must be non-negative")
    cur = P.terms
    for _ in range(i):
        cur = _T_left(sig, cur)
    return WeylElement(sig, dict(cur))


def total_degree(P: WeylElement) -> int:
    """Max |a| + |b| over the terms (T excluded)."""
    if not P.terms:
        raise ValueError("degree of the zero element is undefined")
    N = P.sig.N
    return max(sum(m[:N]) for m in P.terms)


def deg_T(P: WeylElement) -> int:
    if not P.terms:
        raise ValueError("T-degree of the zero element is undefined")
    if not P.sig.has_T:
        raise ValueError("signature has no localization variable")
    return max(m[-2] for m in P.terms)


# ---------------------------------------------------------------------------
# action on functions


def _coeff_to_function(sig: AlgebraSignature, c, ring: PolyRing) -> RationalFunction:
    if isinstance(c, RationalFunction):
        return RationalFunction(ring.convert(c.num), ring.convert(c.den))
    return RationalFunction(ring.constant(ring.field(c)))


def act_on_rational(
    P: WeylElement,
    g,
    exp_twist: Optional[MultiPoly] = None,
) -> List[RationalFunction]:
    """Apply ``P`` to a rational function (or one function per position).

    Returns the list ``[P_i . g_i for i in positions]`` of length rank.  With
    ``exp_twist = h`` the function acted upon is ``g * exp(h)`` and the
    result is returned divided by ``exp(h)`` (each derivative D_v is
    conjugated to D_v + h_v).
    """
    sig = P.sig
    K = sig.coeff_field
    if getattr(K, "is_fraction_field", False) and P.terms:
        # clear the K(t) denominators: (L*P).g = L*(P.g) for a scalar L(t)
        L = K.ring.one
        for c in P.terms.values():
            if not c.den.is_constant():
                L = L * c.den.exact_div(poly_gcd(L, c.den))
        if not L.is_constant():
            Lc = RationalFunction(L, K.ring.one, _reduced=True)
            out = act_on_rational(P.scale(Lc), g, exp_twist)
            Lr = RationalFunction(out[0].ring.convert(L)) if out else None
            return [r / Lr for r in out]
    if isinstance(g, (list, tuple)):
        funcs = list(g)
        if len(funcs) != sig.rank:
            raise ValueError(f"expected {sig.rank} functions")
    else:
        funcs = [g] * sig.rank
    funcs = [f if isinstance(f, RationalFunction) else RationalFunction(f) for f in funcs]
    ring = funcs[0].ring
    if any(f.ring != ring for f in funcs):
        raise SignatureMismatch("functions live in different rings")
    needed = sig.poly_vars + sig.rational_vars
    missing = [v for v in needed if v not in ring.names]
    if missing:
        # lift into a ring that has every variable of the signature
        ring2 = PolyRing(ring.field, ring.names + tuple(missing))
        funcs = [RationalFunction(ring2.convert(f.num), ring2.convert(f.den)) for f in funcs]
        ring = ring2
        if exp_twist is not None:
            exp_twist = ring.convert(exp_twist)
    elif exp_twist is not None and exp_twist.ring != ring:
        exp_twist = ring.convert(exp_twist)
    N = sig.N
    slot_var = {}
    for i, s in enumerate(sig.dx_slot):
        if s is not None:
            slot_var[s] = ring.index(sig.poly_vars[i])
    for j, s in enumerate(sig.dt_slot):
        if s is not None:
            slot_var[s] = ring.index(sig.rational_vars[j])
    x_idx = [ring.index(v) for v in sig.poly_vars]
    twist = {}
    if exp_twist is not None:
        for s, vi in slot_var.items():
            twist[s] = exp_twist.diff(vi)
    finv = None
    if sig.has_T:
        fr = RationalFunction(ring.zero)
        for e, c in sig.localization.terms.items():
            mono = [0] * ring.nvars
            for i, k in zip(x_idx, e):
                mono[i] = k
            fr = fr + _coeff_to_function(sig, c, ring) * RationalFunction(ring.monomial(tuple(mono)))
        finv = _Factored.of(fr.inverse())

    def D(h: "_Factored", s: int) -> "_Factored":
        r = h.diff(slot_var[s])
        if s in twist:
            r = _Factored(r.num + twist[s] * h.num * r.extra(h), r.den)
        return r

    # denominators stay factored until the end: no gcd per term
    parts: List[List[_Factored]] = [[] for _ in range(sig.rank)]
    cache: Dict[tuple, _Factored] = {}
    bases = [_Factored.of(f) for f in funcs]
    for m, c in P.terms.items():
        pos = m[N + 1]
        j = m[N]
        key = (pos, j) + tuple(m[sig.nx:N])
        h = cache.get(key)
        if h is None:
            h = bases[pos]
            for _ in range(j):
                h = h * finv
            for s in range(sig.nx, N):
                for _ in range(m[s]):
                    h = D(h, s)
            cache[key] = h
        if not h.num:
            continue
        mono = [0] * ring.nvars
        for i, k in zip(x_idx, m[: sig.nx]):
            mono[i] += k
        cf = _Factored.of(_coeff_to_function(sig, c, ring))
        parts[pos].append(cf * _Factored(ring.monomial(tuple(mono)), {}) * h)
    return [_Factored.total(ps, ring) for ps in parts]


class _Factored:
    """``num / prod(p^e)`` with the denominator kept as a factor map."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: Dict[MultiPoly, int]):
        self.num = num
        self.den = den

    @classmethod
    def of(cls, r: RationalFunction) -> "_Factored":
        return cls(r.num, {} if r.den.is_constant() else {r.den: 1})

    def __mul__(self, other: "_Factored") -> "_Factored":
        den = dict(self.den)
        for p, e in other.den.items():
            den[p] = den.get(p, 0) + e
        return _Factored(self.num * other.num, den)

    def extra(self, other: "_Factored") -> MultiPoly:
        """``prod p^(e_self - e_other)`` for a denominator dominating ``other``'s."""
        out = self.num.ring.one
        for p, e in self.den.items():
            k = e - other.den.get(p, 0)
            if k:
                out = out * p**k
        return out

    def diff(self, i: int) -> "_Factored":
        # (n/P)' = (n' * prod p - n * sum e_p p' prod_{q != p} q) / (P * prod p)
        ring = self.num.ring
        ps = [p for p in self.den if p.diff(i).terms]
        if not ps:
            return _Factored(self.num.diff(i), self.den)
        prod_all = ring.one
        for p in ps:
            prod_all = prod_all * p
        num = self.num.diff(i) * prod_all
        for p in ps:
            dp = p.diff(i)
            rest = ring.one
            for q in ps:
                if q is not p:
                    rest = rest * q
            num = num - self.num * dp.scale(ring.field(self.den[p])) * rest
        den = dict(self.den)
        for p in ps:
            den[p] += 1
        return _Factored(num, den)

    @staticmethod
    def total(parts: List["_Factored"], ring: PolyRing) -> RationalFunction:
        if not parts:
            return RationalFunction(ring.zero)
        top: Dict[MultiPoly, int] = {}
        for h in parts:
            for p, e in h.den.items():
                top[p] = max(top.get(p, 0), e)
        common = _Factored(ring.one, top)
        num = ring.zero
        for h in parts:
            num = num + h.num * common.extra(h)
        if not num.terms:
            return RationalFunction(ring.zero)
        den = ring.one
        for p, e in top.items():
            den = den * p**e
        return RationalFunction(num, den)


def annihilates(P: WeylElement, g, exp_twist=None) -> bool:
    return all(not r for r in act_on_rational(P, g, exp_twist))


# ---------------------------------------------------------------------------
# printing


def _display_key(sig):
    N = sig.N

    def key(m):
        e = m[:N]
        return (m[N], -m[N + 1], sum(e), tuple(-x for x in reversed(e)))

    return key


def _term_str(sig: AlgebraSignature, m: Monomial, c) -> str:
    from .poly import _format_term

    parts = []
    for name, k in zip(sig.slot_names, m[: sig.N]):
        if k == 1:
            parts.append(name)
        elif k:
            parts.append(f"{name}^{k}")
    j = m[sig.N]
    if j == 1:
        parts.append(sig.T_name)
    elif j:
        parts.append(f"{sig.T_name}^{j}")
    return _format_term(sig.coeff_field, c, "*".join(parts))


def format_element(P: WeylElement, order=None) -> str:
    """Parseable text; rank > 1 prints ``[c_1, ..., c_r]``."""
    sig = P.sig
    key = order.key if order is not None else _display_key(sig)

    def comp_str(terms):
        if not terms:
            return "0"
        ms = sorted(terms, key=key, reverse=True)
        return _join_terms(_term_str(sig, m, terms[m]) for m in ms)

    if sig.rank == 1:
        return comp_str(P.terms)
    comps = [{} for _ in range(sig.rank)]
    for m, c in P.terms.items():
        comps[m[-1]][m] = c
    return "[" + ", ".join(comp_str(t) for t in comps) + "]"
