"""Model-level classes, statistics tables, heatmap grids and the leak-removal check."""

from __future__ import annotations

import csv
import enum
import io
import logging
from dataclasses import dataclass
from typing import Iterable, Mapping

from .identifiability import AssessConfig, IdStatus, assess
from .model import Model, ParamKey, canonicalize, remove_leak, strongly_connected

log = logging.getLogger(__name__)

__all__ = [
    "ModelClass",
    "model_class",
    "StatsTable",
    "stats_by",
    "heatmap_grid",
    "grid_to_csv",
    "Counterexample",
    "check_conjecture_4_5",
    "edge_input_report",
]


class ModelClass(str, enum.Enum):
    IDENTIFIABLE = "globally"
    LOCALLY_IDENTIFIABLE = "locally"
    NONIDENTIFIABLE = "nonidentifiable"

    def __str__(self):
        return self.value


CLASSES = (ModelClass.IDENTIFIABLE, ModelClass.LOCALLY_IDENTIFIABLE, ModelClass.NONIDENTIFIABLE)


def model_class(result) -> ModelClass:
    """Non-identifiability dominates, then local; zero parameters is identifiable."""
    statuses = getattr(result, "statuses", result)
    values = set(statuses.values())
    if IdStatus.NONIDENTIFIABLE in values:
        return ModelClass.NONIDENTIFIABLE
    if IdStatus.LOCALLY in values:
        return ModelClass.LOCALLY_IDENTIFIABLE
    return ModelClass.IDENTIFIABLE


DIMENSIONS = {
    "nodes": lambda m: (m.n,),
    "leaks": lambda m: (len(m.leaks),),
    "inputs": lambda m: (len(m.inputs),),
    "leaks_inputs": lambda m: (len(m.leaks), len(m.inputs)),
}


@dataclass
class StatsTable:
    dimension: str
    cells: dict[tuple, dict[ModelClass, int]]

    def row(self, *group) -> tuple[int, int, int]:
        c = self.cells.get(tuple(group), {})
        return tuple(c.get(k, 0) for k in CLASSES)

    def total(self) -> int:
        return sum(sum(c.values()) for c in self.cells.values())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        head = ["leaks", "inputs"] if self.dimension == "leaks_inputs" else [self.dimension]
        w.writerow(head + [c.value for c in CLASSES])
        for group in sorted(self.cells):
            w.writerow(list(group) + list(self.row(*group)))
        return buf.getvalue()


def stats_by(db: Iterable[tuple[Model, Mapping]], dim: str) -> StatsTable:
    if dim not in DIMENSIONS:
        raise ValueError(f"unknown dimension {dim!r}; choose from {sorted(DIMENSIONS)}")
    group_of = DIMENSIONS[dim]
    cells: dict[tuple, dict[ModelClass, int]] = {}
    for m, r in db:
        g = group_of(m)
        c = cells.setdefault(g, {k: 0 for k in CLASSES})
        c[model_class(r)] += 1
    return StatsTable(dim, cells)


def heatmap_grid(
    db: Iterable[tuple[Model, Mapping]],
    class_filter: ModelClass | str | None = None,
    max_inputs: int = 2,
    max_leaks: int = 4,
) -> list[list[int]]:
    """Counts with rows = #inputs and columns = #leaks."""
    if class_filter in (None, "all"):
        want = None
    else:
        want = ModelClass(class_filter)
    grid = [[0] * (max_leaks + 1) for _ in range(max_inputs + 1)]
    for m, r in db:
        if want is not None and model_class(r) is not want:
            continue
        grid[len(m.inputs)][len(m.leaks)] += 1
    return grid


def grid_to_csv(grid: list[list[int]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["inputs\\leaks"] + list(range(len(grid[0]))))
    for i, row in enumerate(grid):
        w.writerow([i] + row)
    return buf.getvalue()


@dataclass
class Counterexample:
    model: Model
    before: dict[ParamKey, IdStatus]
    after: dict[ParamKey, IdStatus]

    @property
    def leak(self) -> int:
        return next(iter(self.model.leaks))

    @property
    def reduced(self) -> Model:
        return remove_leak(self.model, self.leak)

    def to_dict(self) -> dict:
        return {
            "model": str(self.model),
            "without_leak": str(self.reduced),
            "before": {k.name: v.value for k, v in sorted(self.before.items())},
            "after": {k.name: v.value for k, v in sorted(self.after.items())},
        }


def _lookup(db, m: Model, cfg: AssessConfig):
    try:
        return db.get(m)
    except KeyError:
        log.warning("%s not in database; assessing on the fly", m)
        return assess(m, cfg).statuses


def check_conjecture_4_5(db, max_nodes: int, cfg: AssessConfig = AssessConfig()) -> list[Counterexample]:
    """Strongly connected, >= 1 input, exactly one leak, identifiable or locally
    identifiable, yet some parameter is non-identifiable once the leak goes."""
    found = []
    for m, r in db:
        if m.n > max_nodes or len(m.leaks) != 1 or not m.inputs:
            continue
        if model_class(r) is ModelClass.NONIDENTIFIABLE or not strongly_connected(m):
            continue
        reduced = remove_leak(m, next(iter(m.leaks)))
        after = _lookup(db, reduced, cfg)
        if IdStatus.NONIDENTIFIABLE in after.values():
            found.append(Counterexample(m, dict(r), dict(after)))
    found.sort(key=lambda c: canonicalize(c.model).key)
    return found


def edge_input_report(db, max_nodes: int = 3) -> dict[str, dict[str, int]]:
    """Status counts of edges ``i -> j`` with an input at ``i``, under two
    readings of "j leads directly to an output":

    * ``target_is_output``: ``j`` is itself an output;
    * ``target_feeds_output``: ``j`` has an edge into an output.
    """
    out = {"target_is_output": {}, "target_feeds_output": {}}
    for m, r in db:
        if m.n > max_nodes:
            continue
        for i, j in sorted(m.edges):
            if i not in m.inputs:
                continue
            s = r[ParamKey.edge(i, j)].value
            if j in m.outputs:
                d = out["target_is_output"]
                d[s] = d.get(s, 0) + 1
            if any((j, o) in m.edges for o in m.outputs):
                d = out["target_feeds_output"]
                d[s] = d.get(s, 0) + 1
    return out
