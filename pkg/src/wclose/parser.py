"""Operator expressions and problem files.

Expression grammar (whitespace is insignificant)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' INTEGER)?
    atom   := INTEGER | NAME | '(' expr ')' | '[' expr (',' expr)* ']'

``*`` is the non-commutative product, evaluated left to right, so
``Dx*(x^2 - y^3)`` is the composition and normal-orders to
``(x^2 - y^3)*Dx + 2*x``.  ``a/b`` requires ``b`` to be a nonzero
coefficient (an element of K or K(t)).

Problem files are ``key: value`` lines; ``#`` starts a comment and lines
beginning with whitespace continue the previous value.  Keys: ``vars``,
``rational``, ``rank``, ``field``, ``order``, ``loc``, ``function``, ``exp``
and the repeatable ``gen``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Optional

from .fields import parse_field
from .poly import MultiPoly, PolyRing
from .ratfun import RationalFunction
from .weyl import AlgebraSignature, WeylElement, format_element, vector


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))", re.S)


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind, self.text, self.pos = kind, text, pos


def _tokenize(text: str, line0: int = 1, col0: int = 1):
    toks = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None or m.lastindex is None:
            break
        if m.group(1):
            toks.append(_Tok("int", m.group(1), m.start(1)))
        elif m.group(2):
            toks.append(_Tok("name", m.group(2), m.start(2)))
        else:
            toks.append(_Tok("op", m.group(3), m.start(3)))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    """Recursive descent over a token list; ``ops`` supplies the semantics."""

    def __init__(self, text: str, ops, line0=1, col0=1):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.ops = ops
        self.line0, self.col0 = line0, col0

    def error(self, msg, tok=None):
        tok = tok or self.toks[self.i]
        before = self.text[: tok.pos]
        line = self.line0 + before.count("\n")
        col = (tok.pos - before.rfind("\n")) if "\n" in before else self.col0 + tok.pos
        raise ParseError(msg, line, col)

    def peek(self):
        return self.toks[self.i]

    def take(self, text=None):
        t = self.toks[self.i]
        if text is not None and t.text != text:
            self.error(f"expected {text!r}, found {t.text or 'end of input'!r}")
        self.i += 1
        return t

    def parse(self):
        v = self.expr()
        if self.peek().kind != "end":
            self.error(f"unexpected {self.peek().text!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek().text in ("+", "-"):
            op = self.take().text
            w = self.term()
            v = self.ops.add(v, w) if op == "+" else self.ops.sub(v, w)
        return v

    def term(self):
        v = self.unary()
        while self.peek().text in ("*", "/"):
            tok = self.take()
            w = self.unary()
            try:
                v = self.ops.mul(v, w) if tok.text == "*" else self.ops.div(v, w)
            except (ValueError, ZeroDivisionError, ArithmeticError) as exc:
                self.error(str(exc), tok)
        return v

    def unary(self):
        if self.peek().text == "-":
            self.take()
            return self.ops.neg(self.unary())
        if self.peek().text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        v = self.atom()
        if self.peek().text == "^":
            self.take()
            neg = False
            if self.peek().text == "-":
                self.take()
                neg = True
            t = self.peek()
            if t.kind != "int":
                self.error("exponent must be a non-negative integer")
            self.take()
            try:
                v = self.ops.pow(v, -int(t.text) if neg else int(t.text))
            except (ValueError, ZeroDivisionError) as exc:
                self.error(str(exc), t)
        return v

    def atom(self):
        t = self.peek()
        if t.kind == "int":
            self.take()
            return self.ops.integer(int(t.text))
        if t.kind == "name":
            self.take()
            try:
                return self.ops.name(t.text)
            except KeyError:
                self.error(f"undeclared variable {t.text!r}", t)
        if t.text == "(":
            self.take()
            v = self.expr()
            self.take(")")
            return v
        if t.text == "[":
            self.take()
            items = [self.expr()]
            while self.peek().text == ",":
                self.take()
                items.append(self.expr())
            self.take("]")
            try:
                return self.ops.vector(items)
            except ValueError as exc:
                self.error(str(exc), t)
        self.error(f"unexpected {t.text or 'end of input'!r}")


class _OperatorOps:
    def __init__(self, sig: AlgebraSignature):
        self.sig = sig

    def integer(self, n):
        return self.sig.constant(n)

    def name(self, s):
        return self.sig.gen(s)

    add = staticmethod(lambda a, b: a + b)
    sub = staticmethod(lambda a, b: a - b)
    neg = staticmethod(lambda a: -a)

    @staticmethod
    def mul(a, b):
        return a * b

    def div(self, a, b):
        sig = self.sig
        if not b.terms:
            raise ZeroDivisionError("division by zero")
        zero = (0,) * (sig.N + 2)
        if set(b.terms) != {zero}:
            raise ValueError("can only divide by a coefficient")
        return a.scale(sig.coeff_field.inv(b.terms[zero]))

    def pow(self, a, n):
        if n < 0:
            zero = (0,) * (self.sig.N + 2)
            if set(a.terms) != {zero}:
                raise ValueError("negative powers only of coefficients")
            return self.sig.constant(self.sig.coeff_field.inv(a.terms[zero])) ** (-n)
        return a**n

    def vector(self, items):
        for it in items:
            if not it.is_scalar():
                raise ValueError("nested vectors are not allowed")
        if len(items) != self.sig.rank:
            raise ValueError(f"vector of length {len(items)} in rank {self.sig.rank}")
        return vector(self.sig, items)


class _FunctionOps:
    def __init__(self, ring: PolyRing):
        self.ring = ring

    def integer(self, n):
        return RationalFunction(self.ring.constant(self.ring.field(n)))

    def name(self, s):
        if s not in self.ring.names:
            raise KeyError(s)
        return RationalFunction(self.ring.gen(s))

    add = staticmethod(lambda a, b: a + b)
    sub = staticmethod(lambda a, b: a - b)
    neg = staticmethod(lambda a: -a)
    mul = staticmethod(lambda a, b: a * b)

    @staticmethod
    def div(a, b):
        if not b:
            raise ZeroDivisionError("division by zero")
        return a / b

    @staticmethod
    def pow(a, n):
        return a**n

    def vector(self, items):
        raise ValueError("vectors are not functions")


def parse_operator(text: str, sig: AlgebraSignature, line: int = 1, col: int = 1) -> WeylElement:
    """Parse and normal-order an operator (or a vector of operators)."""
    v = _Parser(text, _OperatorOps(sig), line, col).parse()
    return v


def parse_function(text: str, ring: PolyRing, line: int = 1, col: int = 1) -> RationalFunction:
    return _Parser(text, _FunctionOps(ring), line, col).parse()


def parse_polynomial(text: str, ring: PolyRing, line: int = 1, col: int = 1) -> MultiPoly:
    r = parse_function(text, ring, line, col)
    if not r.is_polynomial():
        raise ParseError("expected a polynomial", line, col)
    return r.num.scale(ring.field.inv(r.den.lc()))


def parse_loc_poly(text: str, sig: AlgebraSignature, line: int = 1, col: int = 1) -> MultiPoly:
    """A polynomial in the polynomial variables with K(t) coefficients."""
    P = parse_operator(text, sig, line, col)
    if not P.is_scalar() or not P.is_T_free() or any(any(m[sig.nx:sig.N]) for m in P.terms):
        raise ParseError("localization polynomial must not involve derivatives, T or vectors", line, col)
    if not P.terms:
        raise ParseError("localization polynomial must be nonzero", line, col)
    return sig.loc_ring.from_dict({m[: sig.nx]: c for m, c in P.terms.items()})


@dataclass
class ProblemFile:
    poly_vars: List[str]
    rat_vars: List[str] = field(default_factory=list)
    rank: int = 1
    field_spec: str = "QQ"
    generators: List[WeylElement] = field(default_factory=list)
    loc_poly: Optional[MultiPoly] = None
    order_text: Optional[str] = None
    function: Optional[RationalFunction] = None
    exp_poly: Optional[MultiPoly] = None
    sig: Optional[AlgebraSignature] = None

    def order(self, default=None):
        from .orders import default_order, parse_order

        text = default or self.order_text
        if text is None:
            return default_order(self.sig)
        return parse_order(text, self.sig)


_KEYS = ("vars", "rational", "rank", "field", "order", "loc", "function", "exp", "gen")


def _split_lines(text: str):
    """Yield ``(key, value, line, col)`` with continuation lines merged."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if line[0].isspace():
            if not entries:
                raise ParseError("continuation line without a key", lineno, 1)
            entries[-1][1] += "\n" + line
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", lineno, 1)
        key, value = line.split(":", 1)
        key = key.strip()
        if key not in _KEYS:
            raise ParseError(f"unknown key {key!r}", lineno, 1)
        entries.append([key, value, lineno, len(key) + 2])
    return entries


def _names(value: str, line: int) -> List[str]:
    out = [v.strip() for v in value.replace("\n", " ").split(",") if v.strip()]
    for v in out:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
            raise ParseError(f"bad variable name {v!r}", line, 1)
    return out


def parse_problem(text: str, field_spec: Optional[str] = None) -> ProblemFile:
    """Parse problem-file text; ``field_spec`` overrides the file's ``field`` key."""
    entries = _split_lines(text)
    header = {}
    for key, value, line, col in entries:
        if key in ("vars", "rational", "rank", "field", "order"):
            if key in header:
                raise ParseError(f"duplicate key {key!r}", line, 1)
            header[key] = (value.strip(), line)
    poly_vars = _names(header["vars"][0], header["vars"][1]) if "vars" in header else []
    rat_vars = _names(header["rational"][0], header["rational"][1]) if "rational" in header else []
    rank = 1
    if "rank" in header:
        try:
            rank = int(header["rank"][0])
        except ValueError:
            raise ParseError("rank must be an integer", header["rank"][1], 1) from None
    if field_spec is None:
        field_spec = header.get("field", ("QQ", 0))[0]
    try:
        K = parse_field(field_spec)
    except ValueError as exc:
        raise ParseError(str(exc), header.get("field", ("", 1))[1], 1) from None
    try:
        sig = AlgebraSignature(poly_vars, rat_vars, field=K, rank=rank)
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from None
    pf = ProblemFile(poly_vars, rat_vars, rank, K.spec(), sig=sig)
    if "order" in header:
        pf.order_text = header["order"][0]
        try:
            pf.order()
        except (ValueError, KeyError) as exc:
            raise ParseError(f"bad order: {exc}", header["order"][1], 1) from None
    fring = sig.function_ring
    for key, value, line, col in entries:
        if key == "gen":
            pf.generators.append(parse_operator(value, sig, line, col))
        elif key == "loc":
            if pf.loc_poly is not None:
                raise ParseError("duplicate key 'loc'", line, 1)
            pf.loc_poly = parse_loc_poly(value, sig, line, col)
        elif key == "function":
            pf.function = parse_function(value, fring, line, col)
        elif key == "exp":
            pf.exp_poly = parse_polynomial(value, fring, line, col)
    return pf


def format_problem(pf: ProblemFile, generators=None) -> str:
    """Problem-file text; ``parse_problem`` reads it back to the same data."""
    lines = []
    if pf.poly_vars:
        lines.append("vars: " + ", ".join(pf.poly_vars))
    if pf.rat_vars:
        lines.append("rational: " + ", ".join(pf.rat_vars))
    if pf.rank != 1:
        lines.append(f"rank: {pf.rank}")
    lines.append(f"field: {pf.field_spec}")
    if pf.order_text:
        lines.append(f"order: {pf.order_text}")
    if pf.loc_poly is not None:
        lines.append(f"loc: {pf.loc_poly.to_str()}")
    if pf.function is not None:
        lines.append(f"function: {pf.function.to_str()}")
    if pf.exp_poly is not None:
        lines.append(f"exp: {pf.exp_poly.to_str()}")
    for g in pf.generators if generators is None else generators:
        lines.append(f"gen: {format_element(g)}")
    return "\n".join(lines) + "\n"


def load_problem(path: str, field_spec: Optional[str] = None) -> ProblemFile:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read(), field_spec)
