"""Enumerate database-convention models, one per isomorphism class.

Convention: weakly connected graph, exactly ``outputs_exactly`` outputs,
at most ``max_inputs`` inputs, any leak set, and every vertex reaches an
output.

Rather than canonicalizing every labeled (graph, decoration) pair, the
labeled digraphs are first grouped into isomorphism classes; decorations of
a class representative are then reduced modulo its automorphism group.
Only the surviving orbit representatives are passed to
:func:`~compartdb.model.canonicalize`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .model import (
    Model,
    all_reach_output,
    canonicalize,
    permutations,
    weakly_connected,
)

__all__ = ["EnumerationConfig", "enumerate_digraphs", "enumerate_models", "digraph_classes"]


@dataclass(frozen=True)
class EnumerationConfig:
    n: int
    max_inputs: int = 2
    outputs_exactly: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0 <= self.max_inputs <= self.n:
            raise ValueError("max_inputs must lie in [0, n]")
        if not 0 <= self.outputs_exactly <= self.n:
            raise ValueError("outputs_exactly must lie in [0, n]")


def _all_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(n) if i != j]


def enumerate_digraphs(n: int) -> Iterator[frozenset[tuple[int, int]]]:
    """All 2**(n(n-1)) labeled simple digraphs without self-loops."""
    pairs = _all_pairs(n)
    for mask in range(1 << len(pairs)):
        yield frozenset(p for b, p in enumerate(pairs) if mask >> b & 1)


def _edge_code(edges) -> tuple:
    return tuple(sorted(edges))


def digraph_classes(n: int) -> list[tuple[frozenset, list[tuple[int, ...]]]]:
    """Isomorphism-class representatives with their automorphism groups."""
    perms = permutations(n)
    seen: set[frozenset] = set()
    out = []
    for edges in enumerate_digraphs(n):
        if edges in seen:
            continue
        orbit = set()
        auts = []
        for p in perms:
            img = frozenset((p[i], p[j]) for i, j in edges)
            orbit.add(img)
            if img == edges:
                auts.append(p)
        seen |= orbit
        out.append((edges, auts))
    return out


def _subsets(n: int, max_size: int) -> list[frozenset[int]]:
    return [
        frozenset(c)
        for r in range(max_size + 1)
        for c in itertools.combinations(range(n), r)
    ]


def _deco_code(ins, outs, leaks) -> tuple:
    return (tuple(sorted(ins)), tuple(sorted(outs)), tuple(sorted(leaks)))


def enumerate_models(cfg: EnumerationConfig) -> Iterator[Model]:
    """Yield canonical representatives in ascending canonical-key order."""
    n = cfg.n
    input_sets = _subsets(n, cfg.max_inputs)
    leak_sets = _subsets(n, n)
    output_sets = [
        frozenset(c) for c in itertools.combinations(range(n), cfg.outputs_exactly)
    ]
    found: dict[str, Model] = {}
    for edges, auts in digraph_classes(n):
        probe = Model(n, edges, frozenset(), frozenset(), frozenset())
        if not weakly_connected(probe):
            continue
        for outs in output_sets:
            if not all_reach_output(Model(n, edges, frozenset(), outs, frozenset())):
                continue
            for ins in input_sets:
                for leaks in leak_sets:
                    code = _deco_code(ins, outs, leaks)
                    if any(
                        _deco_code(
                            [p[v] for v in ins], [p[v] for v in outs], [p[v] for v in leaks]
                        )
                        < code
                        for p in auts
                    ):
                        continue
                    cf = canonicalize(Model(n, edges, ins, outs, leaks))
                    found[cf.key] = cf.canonical
    for key in sorted(found):
        yield found[key]
