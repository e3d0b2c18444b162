"""ODE system, compartmental matrix and input-output equations of a model.

For output ``o`` the input-output equation is

    det(sI - A) y = sum_j (-1)**(o + j) * minor_{j,o}(sI - A) * u_j

with ``s`` read as d/dt.  Both sides are polynomials in ``s`` whose
coefficients are polynomials in the rate constants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .algebra.fields import QQ
from .algebra.poly import MultiPoly, PolyRing
from .model import Model, ParamKey, param_keys

__all__ = [
    "OdeSystem",
    "IOEquation",
    "CoefficientMap",
    "param_ring",
    "to_ode_system",
    "compartmental_matrix",
    "determinant",
    "io_equation",
    "coefficient_map",
    "model_coefficient_map",
]


def param_ring(m: Model, extra: tuple[str, ...] = ()) -> PolyRing:
    return PolyRing([k.name for k in param_keys(m)] + list(extra), QQ)


@dataclass
class OdeSystem:
    """``x_i' = sum_j coeffs[i][j] * x_j (+ u_i)``, ``y_o = x_o``."""

    model: Model
    ring: PolyRing
    coeffs: list[dict[int, MultiPoly]]
    inputs: list[int]
    outputs: list[int]

    def __str__(self) -> str:
        lines = []
        for i, row in enumerate(self.coeffs):
            terms = []
            for j in sorted(row):
                c = row[j]
                cs = str(c)
                if len(c.terms) > 1:
                    cs = f"({cs})"
                terms.append(f"{cs}*x{j}")
            if i in self.inputs:
                terms.append(f"u{i}")
            rhs = " + ".join(terms) if terms else "0"
            lines.append(f"x{i}' = {rhs}".replace("+ -", "- "))
        for o in self.outputs:
            lines.append(f"y{o} = x{o}")
        return "\n".join(lines)


def compartmental_matrix(m: Model, ring: PolyRing | None = None) -> list[list[MultiPoly]]:
    """``A[j][i]`` = rate of ``i -> j``; ``A[i][i]`` = -(leak + outflows of ``i``)."""
    ring = ring or param_ring(m)
    idx = {k: t for t, k in enumerate(param_keys(m))}
    A = [[ring.zero() for _ in range(m.n)] for _ in range(m.n)]
    for i, j in sorted(m.edges):
        a = ring.var(idx[ParamKey.edge(i, j)])
        A[j][i] = A[j][i] + a
        A[i][i] = A[i][i] - a
    for i in sorted(m.leaks):
        A[i][i] = A[i][i] - ring.var(idx[ParamKey.leak(i)])
    return A


def to_ode_system(m: Model) -> OdeSystem:
    ring = param_ring(m)
    A = compartmental_matrix(m, ring)
    coeffs = [{j: A[i][j] for j in range(m.n) if A[i][j]} for i in range(m.n)]
    return OdeSystem(m, ring, coeffs, sorted(m.inputs), sorted(m.outputs))


def determinant(M: list[list[MultiPoly]], ring: PolyRing) -> MultiPoly:
    """Cofactor expansion along rows, memoized on the remaining column set."""
    n = len(M)
    if n == 0:
        return ring.one()

    @lru_cache(maxsize=None)
    def sub(row: int, cols: tuple[int, ...]) -> MultiPoly:
        if row == n - 1:
            return M[row][cols[0]]
        total = ring.zero()
        for k, c in enumerate(cols):
            if not M[row][c]:
                continue
            rest = sub(row + 1, cols[:k] + cols[k + 1 :])
            if not rest:
                continue
            term = M[row][c] * rest
            total = total - term if k % 2 else total + term
        return total

    return sub(0, tuple(range(n)))


@dataclass
class IOEquation:
    """``sum lhs[d] * y^(d) = sum_j sum rhs[j][d] * u_j^(d)``; orders descending."""

    model: Model
    output: int
    ring: PolyRing
    lhs: list[tuple[int, MultiPoly]]
    rhs: dict[int, list[tuple[int, MultiPoly]]] = field(default_factory=dict)

    def __str__(self) -> str:
        def side(terms, var):
            parts = []
            for d, c in terms:
                sym = var + ("'" * d if d <= 3 else f"^({d})")
                cs = str(c)
                if cs == "1":
                    parts.append(sym)
                else:
                    parts.append(f"({cs})*{sym}" if len(c.terms) > 1 else f"{cs}*{sym}")
            return parts

        left = " + ".join(side(self.lhs, f"y{self.output}"))
        right = []
        for j in sorted(self.rhs):
            right += side(self.rhs[j], f"u{j}")
        return f"{left} = {' + '.join(right) if right else '0'}"


def _split_in_s(p: MultiPoly, ring: PolyRing) -> dict[int, MultiPoly]:
    s = ring.nvars
    out: dict[int, dict] = {}
    for e, c in p.terms.items():
        out.setdefault(e[s], {})[e[:s]] = c
    return {d: MultiPoly(ring, t) for d, t in out.items()}


def io_equation(m: Model, o: int) -> IOEquation:
    if o not in m.outputs:
        raise ValueError(f"vertex {o} is not an output")
    ring = param_ring(m)
    ring_s = param_ring(m, ("s",))
    A = compartmental_matrix(m, ring_s)
    s = ring_s.var(ring_s.nvars - 1)
    M = [[(s if i == j else ring_s.zero()) - A[i][j] for j in range(m.n)] for i in range(m.n)]

    char = _split_in_s(determinant(M, ring_s), ring)
    lhs = [(d, char[d]) for d in sorted(char, reverse=True)]
    rhs: dict[int, list[tuple[int, MultiPoly]]] = {}
    for j in sorted(m.inputs):
        minor = [[M[r][c] for c in range(m.n) if c != o] for r in range(m.n) if r != j]
        cof = determinant(minor, ring_s)
        if (o + j) % 2:
            cof = -cof
        parts = _split_in_s(cof, ring)
        rhs[j] = [(d, parts[d]) for d in sorted(parts, reverse=True)]
    return IOEquation(m, o, ring, lhs, rhs)


@dataclass
class CoefficientMap:
    ring: PolyRing
    polys: list[MultiPoly]

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)


def coefficient_map(eq: IOEquation) -> CoefficientMap:
    """Non-constant coefficients: lhs below the leading 1, then rhs by input."""
    (top, lead), *rest = eq.lhs
    if top != eq.model.n or lead != eq.ring.one():
        raise ValueError("input-output equation is not monic of order n")
    polys = [c for _, c in rest]
    for j in sorted(eq.rhs):
        polys += [c for _, c in eq.rhs[j]]
    return CoefficientMap(eq.ring, [c for c in polys if c and not c.is_constant()])


def model_coefficient_map(m: Model) -> CoefficientMap:
    """Coefficient map for every output, concatenated in output order."""
    maps = [coefficient_map(io_equation(m, o)) for o in sorted(m.outputs)]
    ring = param_ring(m)
    polys: list[MultiPoly] = []
    for cm in maps:
        polys += cm.polys
    return CoefficientMap(ring, polys)
