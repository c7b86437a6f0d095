"""Monomial and module orders.

Every order is compiled to a sort key on monomial tuples (see
:mod:`wclose.weyl`); keys are flat tuples of ints so that ``max`` picks the
leading monomial and a negated key drives a min-heap.
"""

from __future__ import annotations

import re
from typing import Dict, List, Optional, Sequence, Tuple

from .weyl import AlgebraSignature, Monomial, WeylElement

LESS, EQUAL, GREATER = -1, 0, 1


class MonomialOrder:
    """Base class: an order on the exponent slots listed in ``slots``."""

    kind = "abstract"

    def __init__(self, slots: Sequence[int]):
        self.slots = tuple(slots)

    def key(self, m: Monomial) -> tuple:
        raise NotImplementedError

    def covered(self) -> Tuple[int, ...]:
        return self.slots

    def describe(self, names) -> str:
        return f"{self.kind}({','.join(names[i] for i in self.slots)})"


class Grevlex(MonomialOrder):
    kind = "grevlex"

    def __init__(self, slots):
        super().__init__(slots)
        self._rev = tuple(reversed(self.slots))

    def key(self, m):
        return (sum(m[i] for i in self.slots),) + tuple(-m[i] for i in self._rev)


class Lex(MonomialOrder):
    kind = "lex"

    def key(self, m):
        return tuple(m[i] for i in self.slots)


class Block(MonomialOrder):
    """First block dominates; ties go to the next one."""

    kind = "block"

    def __init__(self, blocks: Sequence[MonomialOrder]):
        self.blocks = tuple(blocks)
        slots = [s for b in self.blocks for s in b.slots]
        if len(set(slots)) != len(slots):
            raise ValueError("block orders must use disjoint variable groups")
        super().__init__(slots)

    def key(self, m):
        out = ()
        for b in self.blocks:
            out += b.key(m)
        return out

    def describe(self, names):
        return " > ".join(b.describe(names) for b in self.blocks)


class Weight(MonomialOrder):
    """Weighted degree first, then ``tie_break``."""

    kind = "weight"

    def __init__(self, weights: Dict[int, int], tie_break: MonomialOrder):
        if any(w < 0 for w in weights.values()):
            raise ValueError("negative weights are not supported")
        self.weights = {s: int(w) for s, w in weights.items() if w}
        self.tie_break = tie_break
        super().__init__(tie_break.slots)

    def key(self, m):
        return (sum(w * m[s] for s, w in self.weights.items()),) + self.tie_break.key(m)

    def describe(self, names):
        ws = ",".join(str(self.weights.get(s, 0)) for s in self.slots)
        return f"weight({ws}; {self.tie_break.describe(names)})"


class ModuleOrder:
    """Order on module monomials ``x^a D^b T^j e_i``.

    position: ``"pot"`` (position over term) or ``"top"`` (term over
    position).  Smaller positions are preferred (compare greater) unless
    ``position_priority`` gives an explicit ranking.  With ``eliminate_T``
    the T-exponent dominates everything else.
    """

    def __init__(
        self,
        monomial: MonomialOrder,
        position: str = "pot",
        eliminate_T: bool = True,
        position_priority: Optional[Sequence[int]] = None,
    ):
        if position not in ("pot", "top"):
            raise ValueError("position must be 'pot' or 'top'")
        self.monomial = monomial
        self.position = position
        self.eliminate_T = eliminate_T
        self.position_priority = tuple(position_priority) if position_priority else None
        self._cache: Dict[Monomial, tuple] = {}
        self._neg_cache: Dict[Monomial, tuple] = {}
        if self.position_priority:
            rank = {p: -i for i, p in enumerate(self.position_priority)}
            self._pos = lambda p: rank.get(p, -len(rank) - p)
        else:
            self._pos = lambda p: -p

    def _compute(self, m):
        inner = self.monomial.key(m)
        p = self._pos(m[-1])
        T = m[-2]
        if self.position == "pot":
            k = (p,) + inner
        else:
            k = inner + (p,)
        return (T,) + k if self.eliminate_T else k + (T,)

    def key(self, m: Monomial) -> tuple:
        k = self._cache.get(m)
        if k is None:
            k = self._compute(m)
            self._cache[m] = k
        return k

    def neg_key(self, m: Monomial) -> tuple:
        k = self._neg_cache.get(m)
        if k is None:
            k = tuple(-v for v in self.key(m))
            self._neg_cache[m] = k
        return k

    def check_covers(self, sig: AlgebraSignature) -> None:
        cov = sorted(self.monomial.covered())
        if cov != list(range(sig.N)):
            raise ValueError(
                f"order covers slots {cov} but the signature has {sig.N} monomial variables"
            )

    def describe(self, sig: AlgebraSignature) -> str:
        s = self.monomial.describe(sig.slot_names)
        if self.position != "pot" or sig.rank > 1:
            s += f", {self.position}"
        if sig.has_T and self.eliminate_T:
            s = f"elim({sig.T_name}) > " + s
        return s

    def __repr__(self):
        return f"ModuleOrder({self.monomial.kind}, {self.position}, T-elim={self.eliminate_T})"


# -- convenience constructors -------------------------------------------------

def _slots(sig: AlgebraSignature, names: Optional[Sequence[str]]) -> List[int]:
    if names is None:
        return list(range(sig.N))
    out = []
    for n in names:
        if n not in sig.slot_names:
            raise KeyError(f"{n!r} is not a monomial variable of {sig}")
        out.append(sig.slot_names.index(n))
    return out


def grevlex(sig: AlgebraSignature, names=None, **kw) -> ModuleOrder:
    return ModuleOrder(Grevlex(_slots(sig, names)), **kw)


def lex(sig: AlgebraSignature, names=None, **kw) -> ModuleOrder:
    return ModuleOrder(Lex(_slots(sig, names)), **kw)


def weight_order(sig: AlgebraSignature, weights: Dict[str, int], tie=None, position="top", **kw) -> ModuleOrder:
    tie = tie or Grevlex(range(sig.N))
    w = {sig.slot_names.index(n): v for n, v in weights.items()}
    return ModuleOrder(Weight(w, tie), position=position, **kw)


def derivative_weight_order(sig: AlgebraSignature) -> ModuleOrder:
    """The (0,1) weight (1 on every derivative) refined by grevlex, weight before position."""
    w = {s: 1 for s in sig.deriv_slots}
    return ModuleOrder(Weight(w, Grevlex(range(sig.N))), position="top")


def default_order(sig: AlgebraSignature) -> ModuleOrder:
    """T-elimination, then position over term, then grevlex in slot order."""
    return grevlex(sig)


def compare(order: ModuleOrder, a: Monomial, b: Monomial) -> int:
    if len(a) != len(b):
        raise ValueError("monomials from different signatures")
    ka, kb = order.key(a), order.key(b)
    if ka == kb:
        return EQUAL
    return GREATER if ka > kb else LESS


def leading_term(P: WeylElement, order: ModuleOrder):
    """``(monomial, coefficient)`` of the order-maximal term."""
    if not P.terms:
        raise ValueError("zero element has no leading monomial")
    m = max(P.terms, key=order.key)
    return m, P.terms[m]


def leading_monomial(P: WeylElement, order: ModuleOrder):
    return leading_term(P, order)


# -- text syntax --------------------------------------------------------------

_ORDER_RE = re.compile(r"^\s*(grevlex|lex|elim|weight)\s*(?:\((.*)\))?\s*$", re.S)


def parse_order(text: str, sig: AlgebraSignature, position: str = "pot") -> ModuleOrder:
    """Parse order syntax.

    ``grevlex`` / ``lex``
        over all monomial variables in declaration order.
    ``grevlex(t,x,Dt,Dx)``
        explicit variable sequence (must cover every monomial variable).
    ``elim``
        ``lex(x...) > lex(D...)``, the benchmark elimination block order.
    ``weight(w1,...,wN)`` / ``weight(w1,...,wN; grevlex(...))``
        integer weights per variable in declaration order, then tie-break.
    A trailing ``, top`` or ``, pot`` selects the position layer.
    """
    text = text.strip()
    m = re.match(r"^(.*?)(?:,\s*(pot|top))?\s*$", text, re.S)
    body, pos = m.group(1), m.group(2) or position
    mono = _parse_monomial_order(body, sig)
    order = ModuleOrder(mono, position=pos)
    order.check_covers(sig)
    return order


def _parse_monomial_order(body: str, sig: AlgebraSignature) -> MonomialOrder:
    m = _ORDER_RE.match(body)
    if not m:
        raise ValueError(f"cannot parse order {body!r}")
    kind, args = m.group(1), m.group(2)
    if kind == "elim":
        xs = list(range(sig.nx))
        ds = list(sig.deriv_slots)
        return Block([Lex(xs), Lex(ds)])
    if kind == "weight":
        if not args:
            raise ValueError("weight order needs weights")
        if ";" in args:
            ws, tie = args.split(";", 1)
            tie_order = _parse_monomial_order(tie.strip(), sig)
        else:
            ws, tie_order = args, Grevlex(range(sig.N))
        weights = [int(w) for w in ws.split(",") if w.strip()]
        if len(weights) != sig.N:
            raise ValueError(f"weight vector needs {sig.N} entries")
        return Weight(dict(enumerate(weights)), tie_order)
    slots = _slots(sig, [a.strip() for a in args.split(",")] if args else None)
    return Grevlex(slots) if kind == "grevlex" else Lex(slots)
