"""Sparse multivariate polynomials over QQ or GF(p).

A polynomial is a map from exponent tuples to nonzero coefficients.  Rings
are lightweight descriptors (arity, coefficient domain, variable names);
two polynomials combine only when their rings agree.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .fields import QQ, PrimeField, Rationals

__all__ = ["PolyRing", "MultiPoly", "MonomialOrder", "GREVLEX", "LEX"]


def grevlex_key(e: tuple[int, ...]) -> tuple:
    return (sum(e), tuple(-x for x in reversed(e)))


def lex_key(e: tuple[int, ...]) -> tuple:
    return e


# componentwise negations: ascending rkey = descending monomial (for heaps)
def grevlex_rkey(e: tuple[int, ...]) -> tuple:
    return (-sum(e), tuple(reversed(e)))


def lex_rkey(e: tuple[int, ...]) -> tuple:
    return tuple(-x for x in e)


class MonomialOrder:
    """Total monomial order; the variable order is the ring's index order
    (variable 0 largest)."""

    def __init__(self, name: str):
        if name == "grevlex":
            self._key, self.rkey = grevlex_key, grevlex_rkey
        elif name == "lex":
            self._key, self.rkey = lex_key, lex_rkey
        else:
            raise ValueError(f"unknown monomial order {name!r}")
        self.name = name
        self._cache: dict = {}

    def key(self, e: tuple[int, ...]):
        k = self._cache.get(e)
        if k is None:
            k = self._key(e)
            if len(self._cache) < 1_000_000:
                self._cache[e] = k
        return k

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and other.name == self.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return self.name


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


class PolyRing:
    def __init__(self, names: Sequence[str], domain=QQ):
        self.names = tuple(names)
        self.nvars = len(self.names)
        self.domain = domain

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.nvars == other.nvars
            and self.domain == other.domain
        )

    def __hash__(self):
        return hash((self.nvars, self.domain))

    def __repr__(self):
        return f"PolyRing({list(self.names)}, {self.domain!r})"

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return self.constant(1)

    def constant(self, c) -> "MultiPoly":
        c = self.domain(c)
        if self.domain.is_zero(c):
            return self.zero()
        return MultiPoly(self, {(0,) * self.nvars: c})

    def var(self, i: int) -> "MultiPoly":
        e = [0] * self.nvars
        e[i] = 1
        return MultiPoly(self, {tuple(e): self.domain.one})

    def gens(self) -> list["MultiPoly"]:
        return [self.var(i) for i in range(self.nvars)]

    def with_domain(self, domain) -> "PolyRing":
        return PolyRing(self.names, domain)

    def from_dict(self, terms: Mapping) -> "MultiPoly":
        return MultiPoly(self, {tuple(e): self.domain(c) for e, c in terms.items()})


class MultiPoly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if not ring.domain.is_zero(c)}

    @classmethod
    def _raw(cls, ring, terms):
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        return p

    # -- coercion ---------------------------------------------------------
    def _check(self, other: "MultiPoly"):
        if self.ring.nvars != other.ring.nvars:
            raise ValueError(f"arity mismatch: {self.ring.nvars} vs {other.ring.nvars}")
        if self.ring.domain != other.ring.domain:
            raise ValueError(
                f"coefficient domain mismatch: {self.ring.domain!r} vs {other.ring.domain!r}"
            )

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        dom = self.ring.domain
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = dom.add(t[e], c) if e in t else c
            if dom.is_zero(v):
                t.pop(e, None)
            else:
                t[e] = v
        return MultiPoly._raw(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        dom = self.ring.domain
        return MultiPoly._raw(self.ring, {e: dom.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        dom = self.ring.domain
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = dom.mul(c1, c2)
                if e in t:
                    v = dom.add(t[e], v)
                t[e] = v
        return MultiPoly(self.ring, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "MultiPoly":
        dom = self.ring.domain
        c = dom(c)
        return MultiPoly(self.ring, {e: dom.mul(v, c) for e, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (
            self.ring.nvars == other.ring.nvars
            and self.ring.domain == other.ring.domain
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # -- calculus and evaluation -------------------------------------------
    def diff(self, i: int) -> "MultiPoly":
        """Formal partial derivative with respect to variable ``i``."""
        dom = self.ring.domain
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1 :]
                t[ne] = dom.mul(c, dom(e[i]))
        return MultiPoly(self.ring, t)

    def evaluate(self, point: Mapping[int, object] | Sequence):
        """Substitute values.

        A full sequence returns a domain scalar; a ``{index: value}`` map
        substitutes only those variables and returns a polynomial in the
        same ring.
        """
        dom = self.ring.domain
        if not isinstance(point, Mapping):
            if len(point) != self.ring.nvars:
                raise ValueError("point length does not match ring arity")
            vals = [dom(v) for v in point]
            total = dom.zero
            for e, c in self.terms.items():
                term = c
                for v, k in zip(vals, e):
                    if k:
                        term = dom.mul(term, v**k if isinstance(dom, Rationals) else pow(v, k, dom.modulus))
                total = dom.add(total, term)
            return total
        sub = {i: dom(v) for i, v in point.items()}
        t: dict = {}
        for e, c in self.terms.items():
            ne = list(e)
            for i, v in sub.items():
                if e[i]:
                    c = dom.mul(c, v ** e[i] if isinstance(dom, Rationals) else pow(v, e[i], dom.modulus))
                    ne[i] = 0
            ne = tuple(ne)
            t[ne] = dom.add(t[ne], c) if ne in t else c
        return MultiPoly(self.ring, t)

    # -- structure ------------------------------------------------------------
    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def variables(self) -> set[int]:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    def leading_monomial(self, order: MonomialOrder = GREVLEX):
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder = GREVLEX):
        return self.terms[self.leading_monomial(order)]

    def monic(self, order: MonomialOrder = GREVLEX) -> "MultiPoly":
        if not self.terms:
            return self
        return self.scale(self.ring.domain.inv(self.leading_coefficient(order)))

    def restrict(self, keep: Sequence[int], ring: "PolyRing") -> "MultiPoly":
        """Re-express in ``ring`` whose variables are ``keep`` (others must be absent)."""
        t = {}
        for e, c in self.terms.items():
            if any(e[i] for i in range(len(e)) if i not in keep):
                raise ValueError("polynomial uses a dropped variable")
            t[tuple(e[i] for i in keep)] = c
        return MultiPoly._raw(ring, t)

    def to_domain(self, domain) -> "MultiPoly":
        ring = self.ring.with_domain(domain)
        return MultiPoly(ring, {e: domain(c) for e, c in self.terms.items()})

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def coefficient_in(self, i: int) -> dict[int, "MultiPoly"]:
        """Split by powers of variable ``i``: ``{k: coefficient of x_i**k}``."""
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            out.setdefault(k, {})[e[:i] + (0,) + e[i + 1 :]] = c
        return {k: MultiPoly._raw(self.ring, t) for k, t in out.items()}

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.names
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif isinstance(c, Fraction) and c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def poly_from_terms(ring: PolyRing, terms: Iterable[tuple[Sequence[int], object]]) -> MultiPoly:
    t: dict = {}
    dom = ring.domain
    for e, c in terms:
        e = tuple(e)
        c = dom(c)
        t[e] = dom.add(t[e], c) if e in t else c
    return MultiPoly(ring, t)


def gf(p: int) -> PrimeField:
    return PrimeField(p)
