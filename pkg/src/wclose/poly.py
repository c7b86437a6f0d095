"""Sparse multivariate polynomials over a coefficient field.

Exponent vectors are dense fixed-length tuples.  The gcd works by
content/primitive-part recursion on the main variable combined with a
subresultant pseudo-remainder sequence, so no factorization is needed.
"""

from __future__ import annotations

from typing import Dict, Iterable, Sequence, Tuple

from .fields import SignatureMismatch

Exps = Tuple[int, ...]


def grevlex_key(e: Exps):
    return (sum(e), tuple(-x for x in reversed(e)))


class PolyRing:
    """K[v_1, ..., v_n]; identity is (field, names)."""

    def __init__(self, field, names: Sequence[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.field = field
        self.names = names
        self.nvars = len(names)
        self._zero_exp = (0,) * self.nvars

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.names == other.names
            and self.field == other.field
        )

    def __hash__(self):
        return hash((self.field, self.names))

    def __repr__(self):
        return f"{self.field}[{', '.join(self.names)}]"

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r} in {self}") from None

    @property
    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    @property
    def one(self) -> "MultiPoly":
        return self.constant(self.field.one)

    def constant(self, c) -> "MultiPoly":
        c = c if not isinstance(c, int) else self.field(c)
        if self.field.is_zero(c):
            return MultiPoly(self, {})
        return MultiPoly(self, {self._zero_exp: c})

    def gen(self, name: str) -> "MultiPoly":
        i = self.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return MultiPoly(self, {tuple(e): self.field.one})

    def gens(self):
        return [self.gen(n) for n in self.names]

    def from_dict(self, terms: Dict[Exps, object]) -> "MultiPoly":
        K = self.field
        clean = {}
        for e, c in terms.items():
            c = K(c) if isinstance(c, int) else c
            if not K.is_zero(c):
                clean[tuple(e)] = c
        return MultiPoly(self, clean)

    def monomial(self, e: Exps, c=None) -> "MultiPoly":
        c = self.field.one if c is None else c
        return self.from_dict({tuple(e): c})

    def convert(self, p: "MultiPoly") -> "MultiPoly":
        """Map ``p`` into this ring by variable name (same field)."""
        if p.ring == self:
            return p
        idx = [self.index(n) for n in p.ring.names]
        out = {}
        for e, c in p.terms.items():
            ne = [0] * self.nvars
            for j, k in zip(idx, e):
                ne[j] += k
            out[tuple(ne)] = c
        return MultiPoly(self, out)


class MultiPoly:
    """Immutable polynomial: ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Dict[Exps, object]):
        self.ring = ring
        self.terms = terms

    # -- basic protocol -------------------------------------------------
    def _check(self, other):
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise SignatureMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring.constant(self.ring.field(other))
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(self.ring.field(other))
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (
            len(self.terms) == 1 and self.ring._zero_exp in self.terms
        )

    def constant_coeff(self):
        return self.terms.get(self.ring._zero_exp, self.ring.field.zero)

    def __repr__(self):
        return f"MultiPoly({self.to_str()!r})"

    def __str__(self):
        return self.to_str()

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        K = self.ring.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = K.add(v, c)
                if K.is_zero(v):
                    del out[e]
                else:
                    out[e] = v
        return MultiPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        K = self.ring.field
        return MultiPoly(self.ring, {e: K.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            if isinstance(other, int):
                return self.scale(self.ring.field(other))
            return NotImplemented
        other = self._check(other)
        K = self.ring.field
        add, mul, is_zero = K.add, K.mul, K.is_zero
        out: Dict[Exps, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = mul(c1, c2)
                v = out.get(e)
                out[e] = c if v is None else add(v, c)
        return MultiPoly(self.ring, {e: c for e, c in out.items() if not is_zero(c)})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "MultiPoly":
        K = self.ring.field
        if K.is_zero(c):
            return self.ring.zero
        return MultiPoly(self.ring, {e: K.mul(c, v) for e, v in self.terms.items()})

    def mul_monomial(self, e: Exps, c=None) -> "MultiPoly":
        K = self.ring.field
        out = {}
        for e2, v in self.terms.items():
            out[tuple(a + b for a, b in zip(e, e2))] = v if c is None else K.mul(c, v)
        return MultiPoly(self.ring, out)

    # -- structure ------------------------------------------------------
    def leading_term(self):
        """Leading (exponent, coefficient) under grevlex."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=grevlex_key)
        return e, self.terms[e]

    def lc(self):
        return self.leading_term()[1]

    def monic(self) -> "MultiPoly":
        if not self.terms:
            return self
        K = self.ring.field
        return self.scale(K.inv(self.lc()))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, var) -> int:
        i = var if isinstance(var, int) else self.ring.index(var)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def variables_used(self) -> Tuple[int, ...]:
        used = [0] * self.ring.nvars
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = 1
        return tuple(i for i, u in enumerate(used) if u)

    def diff(self, var) -> "MultiPoly":
        """Formal partial derivative."""
        i = var if isinstance(var, int) else self.ring.index(var)
        K = self.ring.field
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                v = K.mul_int(c, k)
                if not K.is_zero(v):
                    ne = list(e)
                    ne[i] = k - 1
                    out[tuple(ne)] = v
        return MultiPoly(self.ring, out)

    def coeffs_in(self, i: int) -> Dict[int, "MultiPoly"]:
        """Coefficients w.r.t. variable ``i`` (same ring, exponent i zeroed)."""
        out: Dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            ne = e[:i] + (0,) + e[i + 1:]
            out.setdefault(k, {})[ne] = c
        return {k: MultiPoly(self.ring, d) for k, d in out.items()}

    def lc_in(self, i: int) -> "MultiPoly":
        d = self.degree(i)
        return MultiPoly(
            self.ring,
            {e[:i] + (0,) + e[i + 1:]: c for e, c in self.terms.items() if e[i] == d},
        )

    def evaluate(self, values: Sequence) -> object:
        K = self.ring.field
        total = K.zero
        for e, c in self.terms.items():
            t = c
            for v, k in zip(values, e):
                if k:
                    t = K.mul(t, v**k)
            total = K.add(total, t)
        return total

    # -- division -------------------------------------------------------
    def divmod_lex(self, other: "MultiPoly"):
        """Multivariate division by a single polynomial under lex."""
        if not other.terms:
            raise ZeroDivisionError("division by zero polynomial")
        K = self.ring.field
        le = max(other.terms)
        lc_inv = K.inv(other.terms[le])
        rem = dict(self.terms)
        quo: Dict[Exps, object] = {}
        out_rem: Dict[Exps, object] = {}
        while rem:
            e = max(rem)
            c = rem[e]
            if all(a >= b for a, b in zip(e, le)):
                qe = tuple(a - b for a, b in zip(e, le))
                qc = K.mul(c, lc_inv)
                quo[qe] = qc
                for e2, c2 in other.terms.items():
                    me = tuple(a + b for a, b in zip(qe, e2))
                    v = K.sub(rem.get(me, K.zero), K.mul(qc, c2))
                    if K.is_zero(v):
                        rem.pop(me, None)
                    else:
                        rem[me] = v
            else:
                out_rem[e] = c
                del rem[e]
        return MultiPoly(self.ring, quo), MultiPoly(self.ring, out_rem)

    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        q, r = self.divmod_lex(other)
        if r.terms:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other: "MultiPoly") -> bool:
        return not other.divmod_lex(self)[1].terms

    # -- printing -------------------------------------------------------
    def to_str(self) -> str:
        if not self.terms:
            return "0"
        K = self.ring.field
        parts = []
        for e in sorted(self.terms, key=grevlex_key, reverse=True):
            parts.append(_format_term(K, self.terms[e], _monomial_str(self.ring.names, e)))
        return _join_terms(parts)


def _monomial_str(names, e) -> str:
    out = []
    for n, k in zip(names, e):
        if k == 1:
            out.append(n)
        elif k:
            out.append(f"{n}^{k}")
    return "*".join(out)


def _format_term(K, c, mono: str) -> str:
    cs = K.to_str(c)
    compound = getattr(K, "is_fraction_field", False) and not K.is_constant(c) and (
        not c.den.is_constant() or len(c.num.terms) > 1
    )
    if compound:
        cs = f"({cs})"
    if not mono:
        return cs
    if cs == "1":
        return mono
    if cs == "-1":
        return "-" + mono
    return f"{cs}*{mono}"


def _join_terms(parts: Iterable[str]) -> str:
    s = ""
    for p in parts:
        if not s:
            s = p
        elif p.startswith("-"):
            s += " - " + p[1:]
        else:
            s += " + " + p
    return s


# -- gcd ----------------------------------------------------------------

def prem(a: MultiPoly, b: MultiPoly, i: int) -> MultiPoly:
    """Pseudo-remainder of ``a`` by ``b`` in variable ``i``."""
    db = b.degree(i)
    da = a.degree(i)
    if da < db:
        return a
    lcb = b.lc_in(i)
    r = a
    steps = da - db + 1
    while r.terms and r.degree(i) >= db:
        dr = r.degree(i)
        e = [0] * a.ring.nvars
        e[i] = dr - db
        r = r * lcb - (r.lc_in(i) * b).mul_monomial(tuple(e))
        steps -= 1
    if steps > 0:
        r = r * lcb**steps
    return r


def content_in(p: MultiPoly, i: int) -> MultiPoly:
    """gcd of the coefficients of ``p`` viewed as a polynomial in variable ``i``."""
    g = p.ring.zero
    for c in sorted(p.coeffs_in(i).values(), key=lambda q: len(q.terms)):
        g = poly_gcd(g, c)
        if g.is_constant():
            return p.ring.one if g.terms else g
    return g


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Monic (grevlex) greatest common divisor; gcd(a, 0) = monic(a)."""
    if a.ring != b.ring:
        raise SignatureMismatch(f"{a.ring} vs {b.ring}")
    if not a.terms:
        return b.monic()
    if not b.terms:
        return a.monic()
    if a.is_constant() or b.is_constant():
        return a.ring.one
    if a == b:
        return a.monic()
    ua, ub = a.variables_used(), b.variables_used()
    k = max(ua + ub)
    if ua == ub == (k,):
        return _univariate_gcd(a, b, k)
    if k not in ua:
        return poly_gcd(a, content_in(b, k))
    if k not in ub:
        return poly_gcd(content_in(a, k), b)
    ca, cb = content_in(a, k), content_in(b, k)
    c = poly_gcd(ca, cb)
    pa, pb = a.exact_div(ca), b.exact_div(cb)
    g = _subresultant_last(pa, pb, k)
    if g.degree(k) <= 0:
        return c.monic()
    g = g.exact_div(content_in(g, k))
    return (c * g).monic()


def _subresultant_last(a: MultiPoly, b: MultiPoly, k: int) -> MultiPoly:
    """Last nonzero element of the subresultant PRS of primitive a, b in var k."""
    if a.degree(k) < b.degree(k):
        a, b = b, a
    one = a.ring.one
    g = one
    h = one
    while True:
        d = a.degree(k) - b.degree(k)
        r = prem(a, b, k)
        if not r.terms:
            return b
        if r.degree(k) == 0:
            return one
        a = b
        b = r.exact_div(g * h**d)
        g = a.lc_in(k)
        if d == 0:
            pass
        elif d == 1:
            h = g
        else:
            h = (g**d).exact_div(h ** (d - 1))


def _univariate_gcd(a: MultiPoly, b: MultiPoly, k: int) -> MultiPoly:
    """Euclid with monic remainders on dense coefficient lists."""
    K = a.ring.field

    def dense(p):
        out = [K.zero] * (p.degree(k) + 1)
        for e, c in p.terms.items():
            out[e[k]] = c
        return out

    def monic(v):
        inv = K.inv(v[-1])
        return [K.mul(inv, c) for c in v]

    u, v = monic(dense(a)), monic(dense(b))
    if len(u) < len(v):
        u, v = v, u
    while len(v) > 1:
        r = list(u)
        dv = len(v) - 1
        while len(r) - 1 >= dv:
            c = r[-1]
            if not K.is_zero(c):
                shift = len(r) - 1 - dv
                for j in range(dv):
                    r[shift + j] = K.sub(r[shift + j], K.mul(c, v[j]))
            r.pop()
            while r and K.is_zero(r[-1]):
                r.pop()
        if not r:
            break
        u, v = v, monic(r)
    else:
        # v is a nonzero constant
        return a.ring.one
    n = a.ring.nvars
    terms = {}
    for d, c in enumerate(v):
        if not K.is_zero(c):
            e = [0] * n
            e[k] = d
            terms[tuple(e)] = c
    return a.ring.from_dict(terms).monic()
