"""Multivariate division, Buchberger's algorithm and minimal polynomials.

Works over any field domain from :mod:`.fields`; production runs use
GF(p).  Bases are lists of :class:`MultiPoly` sharing one ring.
"""

from __future__ import annotations

import heapq
import itertools
from operator import add, le, sub
from typing import Sequence

from .fields import PrimeField
from .poly import GREVLEX, MonomialOrder, MultiPoly

__all__ = [
    "normal_form",
    "spoly",
    "buchberger",
    "is_groebner",
    "is_zero_dimensional",
    "standard_monomials",
    "minimal_polynomial",
    "is_algebraic",
]


def _divides(a: tuple, b: tuple) -> bool:
    return all(map(le, a, b))


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(map(max, a, b))


def _coprime(a: tuple, b: tuple) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


class _Basis:
    """Reducers in a form convenient for the division loop."""

    def __init__(self, polys: Sequence[MultiPoly], order: MonomialOrder):
        self.items = []
        for g in polys:
            if not g.terms:
                continue
            lm = g.leading_monomial(order)
            lc = g.terms[lm]
            inv = g.ring.domain.inv(lc)
            tail = [(e, g.ring.domain.mul(c, inv)) for e, c in g.terms.items() if e != lm]
            self.items.append((lm, tail))
        self.memo: dict = {}

    @classmethod
    def from_items(cls, items) -> "_Basis":
        b = cls.__new__(cls)
        b.items = items
        b.memo = {}
        return b

    def find(self, m: tuple):
        try:
            return self.memo[m]
        except KeyError:
            pass
        hit = None
        for lm, tail in self.items:
            if _divides(lm, m):
                hit = (lm, tail)
                break
        self.memo[m] = hit
        return hit


def _reduce(terms: dict, basis: _Basis, dom, order: MonomialOrder, full: bool = True) -> dict:
    """Remainder of ``terms`` on division by ``basis``."""
    f = dict(terms)
    r: dict = {}
    rkey = order.rkey
    # max-heap of pending monomials; entries no longer in f are stale
    heap = [(rkey(e), e) for e in f]
    heapq.heapify(heap)
    is_gf = isinstance(dom, PrimeField)
    p = dom.modulus
    while heap:
        _, m = heapq.heappop(heap)
        c = f.pop(m, None)
        if c is None:
            continue
        hit = basis.find(m)
        if hit is None:
            if not full:
                r[m] = c
                r.update(f)
                return r
            r[m] = c
            continue
        lm, tail = hit
        q = tuple(map(sub, m, lm))
        for e, t in tail:
            ne = tuple(map(add, q, e))
            old = f.get(ne)
            if is_gf:
                v = ((old or 0) - c * t) % p
            else:
                v = (old if old is not None else dom.zero) - c * t
            if v:
                f[ne] = v
                if old is None:
                    heapq.heappush(heap, (rkey(ne), ne))
            elif old is not None:
                del f[ne]
    return r


def normal_form(f: MultiPoly, G: Sequence[MultiPoly], order: MonomialOrder = GREVLEX) -> MultiPoly:
    """Fully reduced remainder of ``f`` modulo ``G``."""
    for g in G:
        f._check(g)
    r = _reduce(f.terms, _Basis(G, order), f.ring.domain, order)
    return MultiPoly._raw(f.ring, r)


def spoly(f: MultiPoly, g: MultiPoly, order: MonomialOrder = GREVLEX) -> MultiPoly:
    dom = f.ring.domain
    lf, lg = f.leading_monomial(order), g.leading_monomial(order)
    L = _lcm(lf, lg)
    cf, cg = dom.inv(f.terms[lf]), dom.inv(g.terms[lg])
    qf = tuple(a - b for a, b in zip(L, lf))
    qg = tuple(a - b for a, b in zip(L, lg))
    t: dict = {}
    for e, c in f.terms.items():
        t[tuple(a + b for a, b in zip(qf, e))] = dom.mul(c, cf)
    for e, c in g.terms.items():
        ne = tuple(a + b for a, b in zip(qg, e))
        v = dom.sub(t.get(ne, dom.zero), dom.mul(c, cg))
        t[ne] = v
    return MultiPoly(f.ring, t)


def _monic_terms(terms: dict, dom, order) -> tuple[tuple, dict]:
    lm = max(terms, key=order.key)
    inv = dom.inv(terms[lm])
    return lm, {e: dom.mul(c, inv) for e, c in terms.items()}


def buchberger(F: Sequence[MultiPoly], order: MonomialOrder = GREVLEX) -> list[MultiPoly]:
    """Reduced Groebner basis of the ideal generated by ``F``.

    Normal selection strategy with the Gebauer-Moeller criteria.  The result
    is monic, inter-reduced and sorted by ascending leading monomial.
    """
    F = [f for f in F if f.terms]
    if not F:
        return []
    ring = F[0].ring
    for f in F[1:]:
        F[0]._check(f)
    dom = ring.domain
    key = order.key

    polys: list[dict] = []
    lms: list[tuple] = []
    active: list[int] = []
    pairs: list[tuple[int, int]] = []

    cache: list = []

    def basis_obj():
        # rebuilt only after the active set changes, so the divisor memo persists
        if not cache:
            cache.append(_Basis.from_items(
                [(lms[i], [(e, c) for e, c in polys[i].items() if e != lms[i]]) for i in active]
            ))
        return cache[0]

    def unit():
        return [ring.one()]

    def update(h: int):
        nonlocal pairs, active
        lh = lms[h]
        C = list(active)
        D: list[int] = []
        while C:
            g1 = C.pop()
            lcm1 = _lcm(lh, lms[g1])
            if _coprime(lh, lms[g1]) or not any(
                _divides(_lcm(lh, lms[g2]), lcm1) for g2 in itertools.chain(C, D)
            ):
                D.append(g1)
        E = [(g, h) for g in D if not _coprime(lh, lms[g])]
        kept = []
        for g1, g2 in pairs:
            L = _lcm(lms[g1], lms[g2])
            if (
                _divides(lh, L)
                and _lcm(lms[g1], lh) != L
                and _lcm(lms[g2], lh) != L
            ):
                continue
            kept.append((g1, g2))
        pairs = kept + E
        active = [g for g in active if not _divides(lh, lms[g])] + [h]

    def add(terms: dict) -> bool:
        lm, t = _monic_terms(terms, dom, order)
        if not any(lm):
            return False
        polys.append(t)
        lms.append(lm)
        update(len(polys) - 1)
        cache.clear()
        return True

    # seed with inter-reduced generators
    for f in sorted(F, key=lambda f: key(f.leading_monomial(order))):
        r = _reduce(f.terms, basis_obj(), dom, order)
        if r and not add(r):
            return unit()

    while pairs:
        best = min(
            range(len(pairs)),
            key=lambda k: (key(_lcm(lms[pairs[k][0]], lms[pairs[k][1]])), pairs[k]),
        )
        i, j = pairs.pop(best)
        s = spoly(MultiPoly._raw(ring, polys[i]), MultiPoly._raw(ring, polys[j]), order)
        r = _reduce(s.terms, basis_obj(), dom, order)
        if r and not add(r):
            return unit()

    # minimal basis, then inter-reduce
    G = [i for i in active]
    G = [
        i for i in G if not any(j != i and _divides(lms[j], lms[i]) for j in G)
    ]
    out = []
    for i in G:
        others = _Basis.from_items(
            [(lms[j], [(e, c) for e, c in polys[j].items() if e != lms[j]]) for j in G if j != i]
        )
        r = _reduce(polys[i], others, dom, order)
        lm, t = _monic_terms(r, dom, order)
        out.append(MultiPoly._raw(ring, t))
    out.sort(key=lambda g: key(g.leading_monomial(order)))
    return out


def is_groebner(G: Sequence[MultiPoly], order: MonomialOrder = GREVLEX) -> bool:
    """Every S-polynomial of ``G`` reduces to zero."""
    for f, g in itertools.combinations(G, 2):
        if normal_form(spoly(f, g, order), G, order).terms:
            return False
    return True


def _pure_powers(G: Sequence[MultiPoly], order: MonomialOrder) -> dict[int, int]:
    out: dict[int, int] = {}
    for g in G:
        lm = g.leading_monomial(order)
        nz = [i for i, k in enumerate(lm) if k]
        if len(nz) == 1:
            i = nz[0]
            out[i] = min(out.get(i, lm[i]), lm[i])
    return out


def is_zero_dimensional(G: Sequence[MultiPoly], order: MonomialOrder = GREVLEX) -> bool:
    if not G:
        return False
    if len(G) == 1 and G[0].is_constant():
        return True
    pp = _pure_powers(G, order)
    return len(pp) == G[0].ring.nvars


def standard_monomials(G: Sequence[MultiPoly], order: MonomialOrder = GREVLEX) -> list[tuple]:
    """Monomials outside the leading-term ideal (zero-dimensional case)."""
    if not is_zero_dimensional(G, order):
        raise ValueError("ideal is not zero-dimensional")
    if len(G) == 1 and G[0].is_constant():
        return []
    pp = _pure_powers(G, order)
    lms = [g.leading_monomial(order) for g in G]
    nv = G[0].ring.nvars
    return [
        e
        for e in itertools.product(*(range(pp[i]) for i in range(nv)))
        if not any(_divides(m, e) for m in lms)
    ]


def minimal_polynomial(
    v: int,
    G: Sequence[MultiPoly],
    degree_cap: int | None = None,
    order: MonomialOrder = GREVLEX,
) -> list | None:
    """Least-degree monic ``q`` with ``q(x_v)`` in the ideal of ``G``.

    Returned as ascending coefficient list ``[q0, q1, ..., 1]``, or ``None``
    when no dependence among ``1, x_v, x_v**2, ...`` exists up to the cap.
    ``G`` must be a reduced Groebner basis for ``order``.
    """
    if not G:
        return None
    ring = G[0].ring
    dom = ring.domain
    if len(G) == 1 and G[0].is_constant():
        return [dom.one]
    if v not in _pure_powers(G, order):
        # every power of x_v is a standard monomial
        return None
    if degree_cap is None:
        degree_cap = len(standard_monomials(G, order)) if is_zero_dimensional(G, order) else 256

    basis = _Basis(G, order)
    xv = tuple(1 if i == v else 0 for i in range(ring.nvars))
    width = degree_cap + 1
    # echelon rows (pivot, normal-form vector, combination of powers); rows
    # never contain earlier pivots, so one forward pass reduces a new vector
    rows: list[tuple[tuple, dict, list]] = []
    current = {tuple([0] * ring.nvars): dom.one}
    for d in range(width):
        vec = dict(current)
        comb = [dom.zero] * width
        comb[d] = dom.one
        for piv, rvec, rcomb in rows:
            c = vec.get(piv)
            if c is None:
                continue
            for e, x in rvec.items():
                nv = dom.sub(vec.get(e, dom.zero), dom.mul(c, x))
                if dom.is_zero(nv):
                    vec.pop(e, None)
                else:
                    vec[e] = nv
            comb = [dom.sub(a, dom.mul(c, b)) for a, b in zip(comb, rcomb)]
        if not vec:
            return comb[: d + 1]
        piv = max(vec, key=order.key)
        inv = dom.inv(vec[piv])
        rows.append((piv, {e: dom.mul(x, inv) for e, x in vec.items()}, [dom.mul(x, inv) for x in comb]))
        shifted = {tuple(a + b for a, b in zip(e, xv)): c for e, c in current.items()}
        current = _reduce(shifted, basis, dom, order)
    return None


def is_algebraic(v: int, G: Sequence[MultiPoly], r, order: MonomialOrder = GREVLEX) -> bool:
    """Whether ``x_v`` takes finitely many values on the variety of ``G``.

    Decided by slicing with ``x_v = r`` at a random ``r``: the slice is empty
    (basis ``{1}``) exactly when ``x_v`` is algebraic, barring the finitely
    many ``r`` that hit one of its values.
    """
    ring = G[0].ring
    if len(G) == 1 and G[0].is_constant():
        return True
    if v not in _pure_powers(G, order):
        return False
    if is_zero_dimensional(G, order):
        return True
    H = buchberger(list(G) + [ring.var(v) - ring.constant(r)], order)
    return len(H) == 1 and H[0].is_constant()
