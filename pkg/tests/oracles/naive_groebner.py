"""Deliberately unoptimized commutative Buchberger over QQ.

Polynomials are dicts {exponent tuple: Fraction}.  No criteria, no
strategy: every pair is reduced until nothing new appears, then the basis
is reduced.  Kept separate from the package so it can serve as an
independent reference on small ideals.
"""

from fractions import Fraction
from itertools import combinations


def grevlex(e):
    return (sum(e), tuple(-v for v in reversed(e)))


def lex(e):
    return tuple(e)


def _lead(p, key):
    return max(p, key=key)


def _sub_scaled(p, q, c, shift):
    out = dict(p)
    for e, v in q.items():
        m = tuple(a + b for a, b in zip(e, shift))
        out[m] = out.get(m, Fraction(0)) - c * v
        if out[m] == 0:
            del out[m]
    return out


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def reduce_full(p, G, key):
    p = dict(p)
    r = {}
    while p:
        m = _lead(p, key)
        for g in G:
            lg = _lead(g, key)
            if _divides(lg, m):
                shift = tuple(x - y for x, y in zip(m, lg))
                p = _sub_scaled(p, g, p[m] / g[lg], shift)
                break
        else:
            r[m] = p.pop(m)
    return r


def spoly(f, g, key):
    lf, lg = _lead(f, key), _lead(g, key)
    lcm = tuple(max(a, b) for a, b in zip(lf, lg))
    a = {tuple(x + y for x, y in zip(e, tuple(u - v for u, v in zip(lcm, lf)))): c / f[lf] for e, c in f.items()}
    return _sub_scaled(a, g, 1 / g[lg], tuple(u - v for u, v in zip(lcm, lg)))


def groebner(F, key=grevlex):
    G = [dict(f) for f in F if f]
    changed = True
    while changed:
        changed = False
        for f, g in combinations(list(G), 2):
            r = reduce_full(spoly(f, g, key), G, key)
            if r:
                G.append(r)
                changed = True
    # minimalize
    G.sort(key=lambda g: key(_lead(g, key)))
    minimal = []
    for g in G:
        lg = _lead(g, key)
        if not any(_divides(_lead(h, key), lg) for h in minimal):
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        r = reduce_full(g, others, key)
        lr = _lead(r, key)
        out.append({e: c / r[lr] for e, c in r.items()})
    return sorted(out, key=lambda g: key(_lead(g, key)))


# -- elimination helpers (lex with the eliminated variables first) -------------

def _pad(p, k):
    """Prepend k zero exponents."""
    return {(0,) * k + e: c for e, c in p.items()}


def eliminate(F, k):
    """Generators of <F> ∩ K[last variables]: drop the first k variables."""
    G = groebner(F, lex)
    return [{e[k:]: c for e, c in g.items()} for g in G if all(not any(e[:k]) for e in g)]


def saturate(F, var):
    """<F> : (x_var)^inf via an extra variable u with u*x_var - 1."""
    n = len(next(iter(F[0])))
    e_u = (1,) + tuple(1 if i == var else 0 for i in range(n))
    rab = {e_u: Fraction(1), (0,) * (n + 1): Fraction(-1)}
    return eliminate([_pad(f, 1) for f in F] + [rab], 1)


def intersect(A, B):
    """<A> ∩ <B> from u*A + (1-u)*B."""
    uA = [{(1,) + e: c for e, c in a.items()} for a in A]
    uB = []
    for b in B:
        d = {(0,) + e: c for e, c in b.items()}
        for e, c in b.items():
            d[(1,) + e] = d.get((1,) + e, Fraction(0)) - c
        uB.append({e: c for e, c in d.items() if c})
    return eliminate(uA + uB, 1)
