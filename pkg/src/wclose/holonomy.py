"""Holonomicity test from the leading monomials of a Gröbner basis.

For a module over W_{t,x}(t) with n polynomial variables and m rational
ones, the monomial variables are x (n), Dx (n) and Dt (m).  The quotient is
declared holonomic when, for every subset A of n+1 monomial variables and
every position i, some basis element has its leading monomial in position i
using only variables from A.
"""

from __future__ import annotations

from itertools import combinations
from typing import List, Optional, Tuple

from .groebner import GroebnerBasis
from .orders import leading_term

Witness = Tuple[Tuple[str, ...], int]


class NotReducedError(ValueError):
    pass


def _subsets(sig):
    n = sig.nx
    return combinations(range(sig.N), n + 1)


def is_holonomic(G: GroebnerBasis) -> Tuple[bool, Optional[Witness]]:
    """Return ``(verdict, witness)``; the witness is ``(A, position)`` with a 1-based position.

    The empty basis (zero module) is reported as not holonomic.
    """
    if not G.reduced:
        raise NotReducedError("the holonomicity criterion needs a reduced Gröbner basis")
    sig = G.sig
    if sig is None or not G.elements:
        A = tuple(sig.slot_names[: sig.nx + 1]) if sig is not None else ()
        return False, (A, 1)
    if sig.has_T and any(not g.is_T_free() for g in G.elements):
        raise ValueError("holonomicity is tested on T-free modules only")
    N = sig.N
    if sig.nx + 1 > N:
        return True, None
    # supports of leading monomials, grouped by position
    supports: List[List[frozenset]] = [[] for _ in range(sig.rank)]
    for g in G.elements:
        m, _ = leading_term(g, G.order)
        supp = frozenset(i for i in range(N) if m[i])
        supports[m[N + 1]].append(supp)
    for A in _subsets(sig):
        Aset = frozenset(A)
        for pos in range(sig.rank):
            if not any(s <= Aset for s in supports[pos]):
                return False, (tuple(sig.slot_names[i] for i in A), pos + 1)
    return True, None


def format_witness(w: Witness) -> str:
    A, pos = w
    return f"witness A = {{{', '.join(A)}}}, position {pos}"
