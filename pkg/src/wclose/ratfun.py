"""Rational functions num/den over a polynomial ring, kept in lowest terms."""

from __future__ import annotations

from typing import Sequence

from .fields import SignatureMismatch
from .poly import MultiPoly, PolyRing, poly_gcd


class RationalFunction:
    """Reduced fraction with a monic (grevlex) denominator.

    Reduction is eager, so equal values have identical representations.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None, *, _reduced=False):
        if den is None:
            den = num.ring.one
        if num.ring != den.ring:
            raise SignatureMismatch(f"{num.ring} vs {den.ring}")
        if not den.terms:
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den

    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    def __eq__(self, other):
        if isinstance(other, int):
            return self.den.is_constant() and self.num == other
        if isinstance(other, MultiPoly):
            return self.den.is_constant() and self.num == other
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num.terms)

    def is_zero(self) -> bool:
        return not self.num.terms

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.ring != self.ring:
                raise SignatureMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, MultiPoly):
            return RationalFunction(other, _reduced=False)
        if isinstance(other, int):
            return RationalFunction(self.ring.constant(self.ring.field(other)), self.ring.one, _reduced=True)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        if g.is_constant():
            num = self.num * other.den + other.num * self.den
            return RationalFunction(num, self.den * other.den)
        d1 = self.den.exact_div(g)
        d2 = other.den.exact_div(g)
        num = self.num * d2 + other.num * d1
        return RationalFunction(num, d1 * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.num.terms or not other.num.terms:
            return RationalFunction(self.ring.zero, self.ring.one, _reduced=True)
        # cross-cancel before multiplying keeps intermediate sizes small
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n1 = self.num if g1.is_constant() else self.num.exact_div(g1)
        d2 = other.den if g1.is_constant() else other.den.exact_div(g1)
        n2 = other.num if g2.is_constant() else other.num.exact_div(g2)
        d1 = self.den if g2.is_constant() else self.den.exact_div(g2)
        num, den = n1 * n2, d1 * d2
        K = self.ring.field
        c = K.inv(den.lc())
        return RationalFunction(num.scale(c), den.scale(c), _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.num.terms:
            raise ZeroDivisionError("inverse of zero rational function")
        K = self.ring.field
        c = K.inv(self.num.lc())
        return RationalFunction(self.den.scale(c), self.num.scale(c), _reduced=True)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num**n, self.den**n, _reduced=True)

    def diff(self, var) -> "RationalFunction":
        """Quotient rule."""
        i = var if isinstance(var, int) else self.ring.index(var)
        dn = self.num.diff(i)
        dd = self.den.diff(i)
        if not dd.terms:
            return RationalFunction(dn, self.den)
        return RationalFunction(dn * self.den - self.num * dd, self.den * self.den)

    def evaluate(self, values: Sequence):
        K = self.ring.field
        return K.div(self.num.evaluate(values), self.den.evaluate(values))

    def to_str(self) -> str:
        if self.den.is_constant():
            return self.num.to_str()
        n = self.num.to_str()
        d = self.den.to_str()
        if len(self.num.terms) > 1:
            n = f"({n})"
        if len(self.den.terms) > 1 or "*" in d:
            d = f"({d})"
        return f"{n}/{d}"

    __str__ = to_str

    def __repr__(self):
        return f"RationalFunction({self.to_str()!r})"


def _normalize(num: MultiPoly, den: MultiPoly):
    if not num.terms:
        return num, num.ring.one
    g = poly_gcd(num, den)
    if not g.is_constant():
        num = num.exact_div(g)
        den = den.exact_div(g)
    K = num.ring.field
    c = K.inv(den.lc())
    return num.scale(c), den.scale(c)


class FractionField:
    """K(t_1, ..., t_k) as a coefficient field for Weyl elements."""

    is_fraction_field = True

    def __init__(self, base, names: Sequence[str]):
        self.base = base
        self.ring = PolyRing(base, names)
        self.names = self.ring.names
        self.nvars = len(self.names)
        self.characteristic = base.characteristic
        self.zero = RationalFunction(self.ring.zero, self.ring.one, _reduced=True)
        self.one = RationalFunction(self.ring.one, self.ring.one, _reduced=True)

    def __eq__(self, other):
        return isinstance(other, FractionField) and other.ring == self.ring

    def __hash__(self):
        return hash(("Frac", self.ring))

    def __repr__(self):
        return f"{self.base}({', '.join(self.names)})"

    def spec(self) -> str:
        return self.base.spec()

    def __call__(self, value):
        if isinstance(value, RationalFunction):
            if value.ring != self.ring:
                raise SignatureMismatch(f"{value.ring} vs {self.ring}")
            return value
        if isinstance(value, MultiPoly):
            return RationalFunction(self.ring.convert(value))
        return RationalFunction(self.ring.constant(self.base(value)), self.ring.one, _reduced=True)

    def gen(self, name: str) -> RationalFunction:
        return RationalFunction(self.ring.gen(name), self.ring.one, _reduced=True)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def div(a, b):
        return a / b

    @staticmethod
    def inv(a):
        return a.inverse()

    def mul_int(self, a, n: int):
        c = self.base(n)
        if self.base.is_zero(c):
            return self.zero
        return RationalFunction(a.num.scale(c), a.den, _reduced=True)

    @staticmethod
    def is_zero(a) -> bool:
        return not a.num.terms

    @staticmethod
    def is_one(a) -> bool:
        return a.den.is_constant() and a.num.is_constant() and a.num.terms and a.num.constant_coeff() == 1

    def diff(self, a, i: int):
        return a.diff(i)

    def bit_size(self, a) -> int:
        b = self.base.bit_size
        return sum(b(c) for c in a.num.terms.values()) + sum(b(c) for c in a.den.terms.values())

    @staticmethod
    def to_str(a) -> str:
        return a.to_str()

    @staticmethod
    def is_constant(a) -> bool:
        return a.den.is_constant() and a.num.is_constant()

    def constant_value(self, a):
        """Base-field value of a constant element."""
        return self.base.div(a.num.constant_coeff(), a.den.constant_coeff())
