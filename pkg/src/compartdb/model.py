"""Linear compartment models: representation, graph predicates, canonical labeling.

A model is a simple directed graph on ``n`` compartments plus three vertex
subsets (inputs, outputs, leaks).  Rate constants are addressed by
:class:`ParamKey`: ``Edge(i, j)`` is the rate of flow ``i -> j`` and
``Leak(i)`` the outflow of compartment ``i`` to the environment.

The text form used everywhere on disk and on the command line is::

    graph=[[1],[0,2],[0,1]];in=[0,2];out=[2];leak=[0]

where the ``i``-th inner list holds the out-neighbours of vertex ``i``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, TypeVar

__all__ = [
    "Model",
    "ModelError",
    "ParamKey",
    "CanonicalForm",
    "validate",
    "weakly_connected",
    "strongly_connected",
    "all_reach_output",
    "relabel",
    "canonicalize",
    "relabel_result",
    "remove_leak",
    "parse_model",
    "format_model",
    "param_keys",
]


class ModelError(ValueError):
    """Invalid model description or unparsable model string."""

    def __init__(self, problems: Sequence[str] | str, position: int | None = None):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        self.position = position
        msg = "; ".join(self.problems)
        if position is not None:
            msg = f"{msg} (at position {position})"
        super().__init__(msg)


@dataclass(frozen=True, order=True)
class ParamKey:
    """One rate constant.  ``target is None`` marks a leak of ``source``."""

    kind: int  # 0 = edge, 1 = leak; edges sort before leaks
    source: int
    target: int = -1

    @classmethod
    def edge(cls, i: int, j: int) -> "ParamKey":
        return cls(0, i, j)

    @classmethod
    def leak(cls, i: int) -> "ParamKey":
        return cls(1, i, -1)

    @property
    def is_leak(self) -> bool:
        return self.kind == 1

    @property
    def name(self) -> str:
        if self.is_leak:
            return f"leak({self.source})"
        return f"a({self.source}->{self.target})"

    @property
    def tuple_name(self) -> str:
        """Tuple-style label: ``(i, j)`` for an edge, ``(i, -1)`` for a leak."""
        return f"({self.source}, {self.target})"

    @classmethod
    def from_name(cls, name: str) -> "ParamKey":
        m = re.fullmatch(r"a\((\d+)->(\d+)\)", name)
        if m:
            return cls.edge(int(m.group(1)), int(m.group(2)))
        m = re.fullmatch(r"leak\((\d+)\)", name)
        if m:
            return cls.leak(int(m.group(1)))
        raise ValueError(f"not a parameter name: {name!r}")

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"ParamKey({self.name})"


@dataclass(frozen=True)
class Model:
    n: int
    edges: frozenset[tuple[int, int]]
    inputs: frozenset[int]
    outputs: frozenset[int]
    leaks: frozenset[int]

    @property
    def params(self) -> list[ParamKey]:
        return param_keys(self)

    def out_neighbors(self, i: int) -> list[int]:
        return sorted(j for (a, j) in self.edges if a == i)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in sorted(self.edges):
            adj[i].append(j)
        return adj

    def __str__(self) -> str:
        return format_model(self)


def param_keys(m: Model) -> list[ParamKey]:
    """Parameters in ring-variable order: edges by (i, j), then leaks by i."""
    keys = [ParamKey.edge(i, j) for i, j in sorted(m.edges)]
    keys += [ParamKey.leak(i) for i in sorted(m.leaks)]
    return keys


def validate(
    n: int,
    edges: Iterable[Sequence[int]] = (),
    inputs: Iterable[int] = (),
    outputs: Iterable[int] = (),
    leaks: Iterable[int] = (),
) -> Model:
    """Check a raw description and build a :class:`Model`.

    Every violated invariant is collected; a single :class:`ModelError`
    lists them all.
    """
    problems: list[str] = []
    if not isinstance(n, int) or n < 1:
        raise ModelError(f"vertex count must be a positive integer, got {n!r}")

    def in_range(v, what):
        if not isinstance(v, int) or not 0 <= v < n:
            problems.append(f"{what}: vertex {v} out of range [0, {n})")
            return False
        return True

    edge_set: set[tuple[int, int]] = set()
    for e in edges:
        e = tuple(e)
        if len(e) != 2:
            problems.append(f"edge {e!r} is not a pair")
            continue
        i, j = e
        ok = in_range(i, f"edge {i}->{j}") & in_range(j, f"edge {i}->{j}")
        if ok and i == j:
            problems.append(f"edge {i}->{j}: self-loop")
            continue
        if e in edge_set:
            problems.append(f"edge {i}->{j}: duplicate edge")
            continue
        if ok:
            edge_set.add((i, j))

    def vset(vs, what):
        out: set[int] = set()
        for v in vs:
            if in_range(v, what):
                if v in out:
                    problems.append(f"{what}: duplicate vertex {v}")
                out.add(v)
        return frozenset(out)

    ins = vset(inputs, "inputs")
    outs = vset(outputs, "outputs")
    lks = vset(leaks, "leaks")
    if problems:
        raise ModelError(problems)
    return Model(n, frozenset(edge_set), ins, outs, lks)


# -- graph predicates -------------------------------------------------------


def _reach(n: int, succ: list[list[int]], start: Iterable[int]) -> set[int]:
    seen = set(start)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for w in succ[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def weakly_connected(m: Model) -> bool:
    nbrs: list[list[int]] = [[] for _ in range(m.n)]
    for i, j in m.edges:
        nbrs[i].append(j)
        nbrs[j].append(i)
    return len(_reach(m.n, nbrs, [0])) == m.n


def strongly_connected(m: Model) -> bool:
    fwd: list[list[int]] = [[] for _ in range(m.n)]
    bwd: list[list[int]] = [[] for _ in range(m.n)]
    for i, j in m.edges:
        fwd[i].append(j)
        bwd[j].append(i)
    return len(_reach(m.n, fwd, [0])) == m.n and len(_reach(m.n, bwd, [0])) == m.n


def all_reach_output(m: Model) -> bool:
    """True iff every vertex has a directed path (possibly empty) to an output."""
    bwd: list[list[int]] = [[] for _ in range(m.n)]
    for i, j in m.edges:
        bwd[j].append(i)
    return len(_reach(m.n, bwd, m.outputs)) == m.n


# -- relabeling and canonical form -----------------------------------------


def relabel(m: Model, perm: Sequence[int]) -> Model:
    """Rename vertex ``v`` to ``perm[v]``."""
    p = perm
    return Model(
        m.n,
        frozenset((p[i], p[j]) for i, j in m.edges),
        frozenset(p[v] for v in m.inputs),
        frozenset(p[v] for v in m.outputs),
        frozenset(p[v] for v in m.leaks),
    )


def _key_parts(n, edges, inputs, outputs, leaks) -> str:
    e = ",".join(f"{i}{j}" for i, j in sorted(edges))
    return (
        f"{n}|{e}|{''.join(map(str, sorted(inputs)))}"
        f"|{''.join(map(str, sorted(outputs)))}|{''.join(map(str, sorted(leaks)))}"
    )


def model_key(m: Model) -> str:
    """Text encoding of a labeled model (injective for n <= 10).

    Layout ``n|e1,e2,...|inputs|outputs|leaks`` with each edge written as
    two digits and every list ascending.
    """
    return _key_parts(m.n, m.edges, m.inputs, m.outputs, m.leaks)


_PERMS: dict[int, list[tuple[int, ...]]] = {}


def permutations(n: int) -> list[tuple[int, ...]]:
    if n not in _PERMS:
        _PERMS[n] = list(itertools.permutations(range(n)))
    return _PERMS[n]


@dataclass(frozen=True)
class CanonicalForm:
    canonical: Model
    permutation: tuple[int, ...]  # original label -> canonical label
    key: str


def canonicalize(m: Model) -> CanonicalForm:
    """Relabeling with the lexicographically least key over all n! permutations."""
    best_key = None
    best_perm = None
    edges, ins, outs, leaks = m.edges, m.inputs, m.outputs, m.leaks
    for p in permutations(m.n):
        k = _key_parts(
            m.n,
            [(p[i], p[j]) for i, j in edges],
            [p[v] for v in ins],
            [p[v] for v in outs],
            [p[v] for v in leaks],
        )
        if best_key is None or k < best_key:
            best_key, best_perm = k, p
    assert best_perm is not None
    return CanonicalForm(relabel(m, best_perm), best_perm, best_key)


def invert(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return tuple(inv)


V = TypeVar("V")


def relabel_param(k: ParamKey, perm: Sequence[int]) -> ParamKey:
    if k.is_leak:
        return ParamKey.leak(perm[k.source])
    return ParamKey.edge(perm[k.source], perm[k.target])


def relabel_result(result: Mapping[ParamKey, V], perm: Sequence[int]) -> dict[ParamKey, V]:
    return {relabel_param(k, perm): v for k, v in result.items()}


def remove_leak(m: Model, i: int) -> Model:
    if i not in m.leaks:
        raise ModelError(f"vertex {i} has no leak")
    return Model(m.n, m.edges, m.inputs, m.outputs, m.leaks - {i})


# -- text form ----------------------------------------------------------------


class _Parser:
    def __init__(self, s: str):
        self.s = s
        self.pos = 0

    def fail(self, msg: str):
        raise ModelError(msg, position=self.pos)

    def expect(self, lit: str):
        if not self.s.startswith(lit, self.pos):
            found = self.s[self.pos : self.pos + len(lit)] or "end of input"
            self.fail(f"expected {lit!r}, found {found!r}")
        self.pos += len(lit)

    def peek(self) -> str:
        return self.s[self.pos] if self.pos < len(self.s) else ""

    def integer(self) -> int:
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected a vertex number")
        return int(self.s[start : self.pos])

    def int_list(self) -> list[int]:
        self.expect("[")
        out: list[int] = []
        if self.peek() == "]":
            self.pos += 1
            return out
        while True:
            out.append(self.integer())
            if self.peek() == ",":
                self.pos += 1
                continue
            self.expect("]")
            return out

    def graph(self) -> list[list[int]]:
        self.expect("[")
        out: list[list[int]] = []
        if self.peek() == "]":
            self.pos += 1
            return out
        while True:
            out.append(self.int_list())
            if self.peek() == ",":
                self.pos += 1
                continue
            self.expect("]")
            return out


def parse_model(s: str) -> Model:
    """Parse ``graph=[...];in=[...];out=[...];leak=[...]`` (no whitespace)."""
    p = _Parser(s)
    p.expect("graph=")
    adj = p.graph()
    p.expect(";in=")
    ins = p.int_list()
    p.expect(";out=")
    outs = p.int_list()
    if p.pos == len(s):
        p.fail("missing leak field")
    p.expect(";leak=")
    leaks = p.int_list()
    if p.pos != len(s):
        p.fail(f"unexpected trailing text {s[p.pos:]!r}")
    if not adj:
        raise ModelError("graph must have at least one vertex", position=6)
    edges = [(i, j) for i, nb in enumerate(adj) for j in nb]
    return validate(len(adj), edges, ins, outs, leaks)


def _fmt_list(xs: Iterable[int]) -> str:
    return "[" + ",".join(str(x) for x in sorted(xs)) + "]"


def format_model(m: Model) -> str:
    graph = "[" + ",".join(_fmt_list(nb) for nb in m.adjacency()) + "]"
    return (
        f"graph={graph};in={_fmt_list(m.inputs)};out={_fmt_list(m.outputs)}"
        f";leak={_fmt_list(m.leaks)}"
    )
