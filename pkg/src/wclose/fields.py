"""Coefficient fields: exact rationals and prime fields.

Elements are plain values (``gmpy2.mpq`` for QQ, ``int`` residues for
GF(p)).  All arithmetic goes through the field object so the kernels can
stay agnostic of the representation.  Fraction fields of polynomial rings
live in :mod:`wclose.ratfun`.
"""

from __future__ import annotations

import operator
from fractions import Fraction

import gmpy2
from gmpy2 import mpq

DEFAULT_PRIME = 536870909


class SignatureMismatch(ValueError):
    """Operands live in different rings or signatures."""


class RationalField:
    """The field QQ with ``gmpy2.mpq`` elements."""

    characteristic = 0
    nvars = 0
    is_fraction_field = False

    def __init__(self):
        self.zero = mpq(0)
        self.one = mpq(1)
        self.add = operator.add
        self.sub = operator.sub
        self.mul = operator.mul
        self.neg = operator.neg
        self.div = operator.truediv

    def __call__(self, value):
        if isinstance(value, Fraction):
            return mpq(value.numerator, value.denominator)
        if isinstance(value, str):
            return mpq(value)
        return mpq(value)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    def spec(self) -> str:
        return "QQ"

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def mul_int(self, a, n: int):
        return a * n

    def is_zero(self, a) -> bool:
        return not a

    def is_one(self, a) -> bool:
        return a == 1

    def diff(self, a, i: int):
        return self.zero

    def bit_size(self, a) -> int:
        return a.numerator.bit_length() + a.denominator.bit_length()

    def to_str(self, a) -> str:
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def is_constant(self, a) -> bool:
        return True


class PrimeField:
    """GF(p) with residues stored as Python ints in ``[0, p)``."""

    nvars = 0
    is_fraction_field = False

    def __init__(self, p: int = DEFAULT_PRIME):
        p = int(p)
        if p < 2 or p >= 2**63 or not gmpy2.is_prime(p):
            raise ValueError(f"modulus {p} is not a prime below 2^63")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1
        self.add = lambda a, b: (a + b) % p
        self.sub = lambda a, b: (a - b) % p
        self.mul = lambda a, b: (a * b) % p
        self.neg = lambda a: (-a) % p

    def __call__(self, value):
        if isinstance(value, (Fraction, type(mpq(0)))):
            num, den = int(value.numerator), int(value.denominator)
            return num * pow(den, -1, self.p) % self.p
        if isinstance(value, str):
            return self(Fraction(value))
        return int(value) % self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"Fp({self.p})"

    def spec(self) -> str:
        return f"Fp({self.p})"

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def mul_int(self, a, n: int):
        return a * n % self.p

    def is_zero(self, a) -> bool:
        return a == 0

    def is_one(self, a) -> bool:
        return a == 1

    def diff(self, a, i: int):
        return 0

    def bit_size(self, a) -> int:
        return self.p.bit_length()

    def to_str(self, a) -> str:
        # symmetric representative reads better for small negatives
        if a > self.p // 2:
            return str(a - self.p)
        return str(a)

    def is_constant(self, a) -> bool:
        return True


QQ = RationalField()


def parse_field(text: str):
    """Parse ``QQ`` or ``Fp(p)`` (``GF(p)`` accepted too)."""
    t = text.strip().replace(" ", "")
    if t in ("QQ", "Q"):
        return QQ
    for prefix in ("Fp(", "GF(", "F("):
        if t.startswith(prefix) and t.endswith(")"):
            return PrimeField(int(t[len(prefix):-1]))
    if t in ("Fp", "GF"):
        return PrimeField(DEFAULT_PRIME)
    raise ValueError(f"unknown field {text!r}; expected QQ or Fp(p)")
