"""Dense linear algebra over GF(p)."""

from __future__ import annotations

from typing import Sequence

__all__ = ["matrix_rank_fp", "det_bareiss_fp", "in_row_space"]


def _echelon(M: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    rows = [[x % p for x in r] for r in M]
    if not rows:
        return []
    ncols = len(rows[0])
    out: list[list[int]] = []
    col = 0
    while rows and col < ncols:
        piv = next((r for r in rows if r[col]), None)
        if piv is None:
            col += 1
            continue
        rows.remove(piv)
        inv = pow(piv[col], -1, p)
        piv = [x * inv % p for x in piv]
        rows = [
            [(x - r[col] * y) % p for x, y in zip(r, piv)] if r[col] else r for r in rows
        ]
        out.append(piv)
        col += 1
    return out


def matrix_rank_fp(M: Sequence[Sequence[int]], p: int) -> int:
    return len(_echelon(M, p))


def in_row_space(M: Sequence[Sequence[int]], v: Sequence[int], p: int) -> bool:
    return matrix_rank_fp(list(M) + [list(v)], p) == matrix_rank_fp(M, p)


def det_bareiss_fp(M: Sequence[Sequence[int]], p: int) -> int:
    """Fraction-free (Bareiss) elimination; the division is exact in GF(p)."""
    a = [[x % p for x in r] for r in M]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        inv_prev = pow(prev, -1, p)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) * inv_prev % p
        prev = a[k][k]
    return sign * a[n - 1][n - 1] % p
