"""Dense univariate polynomials over GF(p) as ascending coefficient lists."""

from __future__ import annotations

__all__ = ["trim", "derivative", "divmod_poly", "gcd", "monic", "squarefree_part", "degree"]


def trim(q: list[int], p: int) -> list[int]:
    q = [c % p for c in q]
    while q and q[-1] == 0:
        q.pop()
    return q


def degree(q: list[int]) -> int:
    return len(q) - 1


def monic(q: list[int], p: int) -> list[int]:
    q = trim(q, p)
    if not q:
        raise ValueError("zero polynomial")
    inv = pow(q[-1], -1, p)
    return [c * inv % p for c in q]


def derivative(q: list[int], p: int) -> list[int]:
    return trim([k * c for k, c in enumerate(q)][1:], p)


def divmod_poly(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a, b = trim(a, p), trim(b, p)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, p)
    quo = [0] * max(len(a) - len(b) + 1, 0)
    rem = list(a)
    while len(rem) >= len(b):
        c = rem[-1] * inv % p
        shift = len(rem) - len(b)
        quo[shift] = c
        for k, x in enumerate(b):
            rem[shift + k] = (rem[shift + k] - c * x) % p
        rem = trim(rem, p)
    return trim(quo, p), rem


def gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = trim(a, p), trim(b, p)
    while b:
        a, b = b, divmod_poly(a, b, p)[1]
    return monic(a, p) if a else []


def squarefree_part(q: list[int], p: int) -> list[int]:
    """``q / gcd(q, q')``, monic.  Assumes ``p > deg q``."""
    q = trim(q, p)
    if not q:
        raise ValueError("squarefree part of the zero polynomial")
    g = gcd(q, derivative(q, p), p)
    if not g:
        # q' == 0 only for constants when p > deg q
        return monic(q, p)
    return monic(divmod_poly(q, g, p)[0], p)


def roots_in_field(q: list[int], p: int, candidates) -> list[int]:
    """Which of ``candidates`` are roots of ``q``."""
    out = []
    for r in candidates:
        acc = 0
        for c in reversed(q):
            acc = (acc * r + c) % p
        if acc == 0:
            out.append(r % p)
    return out
