"""On-disk database of assessment records keyed by canonical model.

Layout of a database directory::

    manifest.json     {"max_nodes", "counts", "engine", "config"}
    n2.jsonl          one record per line, ascending canonical key
    n3.jsonl
    ...

A record line is::

    {"meta":{"prime":...,"prime2":...,"seed":...,"trials":...,"version":"..."},
     "model":"graph=...;in=...;out=...;leak=...","n":3,
     "params":{"a(0->1)":"globally","leak(0)":"locally",...}}

``a(i->j)`` is the rate of the edge ``i -> j`` and ``leak(i)`` the leak rate
of compartment ``i``.  Keys are sorted inside every JSON object, so a
load/save cycle reproduces the files byte for byte.
"""

from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Iterator, Mapping

from . import __version__
from .analysis import ModelClass, model_class
from .enumerate import EnumerationConfig, enumerate_models
from .identifiability import AssessConfig, AssessmentRecord, IdStatus, assess_labeled
from .model import (
    Model,
    ParamKey,
    canonicalize,
    format_model,
    invert,
    model_key,
    parse_model,
    relabel_result,
    strongly_connected,
)

log = logging.getLogger(__name__)

HOTSPOT_SECONDS = 60.0

Result = dict[ParamKey, IdStatus]
Predicate = Callable[[Model, Result], bool]

__all__ = [
    "Database",
    "ModelNotFound",
    "build",
    "assess_task",
    "record_to_line",
    "record_from_line",
    "n_is",
    "inputs_count",
    "leaks_count",
    "is_strongly_connected",
    "has_status",
    "all_status",
    "class_is",
    "all_of",
]


class ModelNotFound(KeyError):
    pass


# -- serialization ----------------------------------------------------------


def record_to_dict(rec: AssessmentRecord) -> dict:
    return {
        "model": format_model(rec.model),
        "n": rec.model.n,
        "params": {k.name: rec.statuses[k].value for k in sorted(rec.statuses)},
        "meta": {
            "prime": rec.prime,
            "prime2": rec.prime2,
            "seed": rec.seed,
            "trials": rec.trials,
            "version": rec.version,
        },
    }


def record_to_line(rec: AssessmentRecord) -> str:
    return json.dumps(record_to_dict(rec), sort_keys=True, separators=(",", ":"))


def record_from_line(line: str) -> AssessmentRecord:
    d = json.loads(line)
    m = parse_model(d["model"])
    statuses = {ParamKey.from_name(k): IdStatus(v) for k, v in d["params"].items()}
    meta = d["meta"]
    return AssessmentRecord(
        m,
        model_key(m),
        statuses,
        meta["prime"],
        meta["prime2"],
        meta["seed"],
        meta["trials"],
        meta["version"],
    )


def _config_dict(cfg: AssessConfig) -> dict:
    return {
        "prime": cfg.prime,
        "prime2": cfg.prime2,
        "seed": cfg.seed,
        "max_trials": cfg.max_trials,
        "degree_cap": cfg.degree_cap,
        "strategy": cfg.strategy,
    }


# -- predicates -----------------------------------------------------------------


def n_is(k: int) -> Predicate:
    return lambda m, r: m.n == k


def inputs_count(k: int) -> Predicate:
    return lambda m, r: len(m.inputs) == k


def leaks_count(k: int) -> Predicate:
    return lambda m, r: len(m.leaks) == k


def is_strongly_connected(flag: bool = True) -> Predicate:
    return lambda m, r: strongly_connected(m) == flag


def has_status(s: IdStatus | str) -> Predicate:
    s = IdStatus(s)
    return lambda m, r: s in r.values()


def all_status(s: IdStatus | str) -> Predicate:
    s = IdStatus(s)
    return lambda m, r: all(v is s for v in r.values())


def class_is(c: ModelClass | str) -> Predicate:
    c = ModelClass(c)
    return lambda m, r: model_class(r) is c


def all_of(*preds: Predicate) -> Predicate:
    return lambda m, r: all(p(m, r) for p in preds)


# -- database ---------------------------------------------------------------------


class Database:
    """Canonical key -> :class:`AssessmentRecord`, read-only after loading."""

    def __init__(self, records: Iterable[AssessmentRecord] = (), manifest: Mapping | None = None):
        self.records: dict[str, AssessmentRecord] = {}
        for rec in records:
            self.records[rec.key] = rec
        self._keys = sorted(self.records)
        self.manifest = dict(manifest or {})
        self.index: dict[tuple[int, int, int, ModelClass], list[str]] = {}
        for key in self._keys:
            rec = self.records[key]
            m = rec.model
            bucket = (m.n, len(m.inputs), len(m.leaks), model_class(rec.statuses))
            self.index.setdefault(bucket, []).append(key)

    def __len__(self):
        return len(self.records)

    def __contains__(self, m: Model) -> bool:
        return canonicalize(m).key in self.records

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for rec in self.records.values():
            out[str(rec.model.n)] = out.get(str(rec.model.n), 0) + 1
        return dict(sorted(out.items(), key=lambda kv: int(kv[0])))

    def record(self, m: Model) -> AssessmentRecord:
        cf = canonicalize(m)
        try:
            return self.records[cf.key]
        except KeyError:
            raise ModelNotFound(format_model(m)) from None

    def get(self, m: Model) -> Result:
        """Statuses reported in the caller's own vertex labels."""
        cf = canonicalize(m)
        try:
            rec = self.records[cf.key]
        except KeyError:
            raise ModelNotFound(format_model(m)) from None
        return relabel_result(rec.statuses, invert(cf.permutation))

    __getitem__ = get

    def __iter__(self) -> Iterator[tuple[Model, Result]]:
        for key in self._keys:
            rec = self.records[key]
            yield rec.model, dict(rec.statuses)

    iterate = __iter__

    def filterby(self, predicate: Predicate) -> Iterator[tuple[Model, Result]]:
        for m, r in self:
            if predicate(m, r):
                yield m, r

    def bucket(self, n: int, inputs: int, leaks: int, cls: ModelClass) -> list[AssessmentRecord]:
        return [self.records[k] for k in self.index.get((n, inputs, leaks, cls), [])]

    # -- persistence --------------------------------------------------------------
    def shard_lines(self, n: int) -> list[str]:
        return [record_to_line(self.records[k]) for k in self._keys if self.records[k].model.n == n]

    def save(self, path: str | os.PathLike) -> None:
        path = Path(path)
        path.mkdir(parents=True, exist_ok=True)
        ns = sorted({rec.model.n for rec in self.records.values()})
        for n in ns:
            _write_lines(path / f"n{n}.jsonl", self.shard_lines(n))
        manifest = dict(self.manifest)
        manifest["counts"] = self.counts()
        manifest.setdefault("max_nodes", max(ns) if ns else 0)
        manifest.setdefault("engine", f"compartdb {__version__}")
        manifest.setdefault("config", {})
        (path / "manifest.json").write_text(json.dumps(manifest, sort_keys=True, indent=1) + "\n")

    @classmethod
    def load(cls, path: str | os.PathLike) -> "Database":
        path = Path(path)
        if not path.is_dir():
            raise FileNotFoundError(f"no database directory at {path}")
        manifest = {}
        mf = path / "manifest.json"
        if mf.exists():
            manifest = json.loads(mf.read_text())
        records = []
        for shard in sorted(path.glob("n*.jsonl")):
            records += _read_shard(shard)
        db = cls(records, manifest)
        if manifest.get("counts") and manifest["counts"] != db.counts():
            raise ValueError(f"manifest counts {manifest['counts']} disagree with shards {db.counts()}")
        return db

    def verify(self) -> list[str]:
        """Problems with key canonicity or parameter sets (empty when sound)."""
        problems = []
        for key, rec in self.records.items():
            if canonicalize(rec.model).key != key:
                problems.append(f"{key}: stored model is not canonical")
            if set(rec.statuses) != set(rec.model.params):
                problems.append(f"{key}: parameter set mismatch")
        return problems


def _write_lines(path: Path, lines: list[str]) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line + "\n")
    os.replace(tmp, path)


def _read_shard(path: Path) -> list[AssessmentRecord]:
    with open(path, encoding="utf-8") as fh:
        return [record_from_line(line) for line in fh if line.strip()]


# -- building -----------------------------------------------------------------------


def assess_task(args):
    """Worker: ``(model text, canonical key, config)`` -> (record line, seconds)."""
    text, key, cfg = args
    t0 = time.perf_counter()
    rec = assess_labeled(parse_model(text), cfg, key)
    return record_to_line(rec), time.perf_counter() - t0


def build(
    max_nodes: int,
    cfg: AssessConfig = AssessConfig(),
    path: str | os.PathLike | None = None,
    jobs: int = 1,
    min_nodes: int = 2,
    max_inputs: int = 2,
    progress: Callable[[int, int, int], None] | None = None,
) -> Database:
    """Enumerate and assess every model with ``min_nodes <= n <= max_nodes``.

    With a ``path`` the build is resumable: finished shards and the
    ``.partial`` journal of an interrupted shard are reused.
    """
    out_dir = Path(path) if path is not None else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    records: list[AssessmentRecord] = []
    for n in range(min_nodes, max_nodes + 1):
        models = list(enumerate_models(EnumerationConfig(n, max_inputs=min(max_inputs, n))))
        done: dict[str, str] = {}
        shard = journal = None
        if out_dir is not None:
            shard = out_dir / f"n{n}.jsonl"
            journal = out_dir / f"n{n}.jsonl.partial"
            for f in (shard, journal):
                if f.exists():
                    for line in f.read_text().splitlines():
                        if line.strip():
                            rec = record_from_line(line)
                            done[rec.key] = line
        todo = [(format_model(m), model_key(m), cfg) for m in models if model_key(m) not in done]
        log.info("n=%d: %d models, %d already assessed", n, len(models), len(models) - len(todo))
        jfh = open(journal, "a", encoding="utf-8") if journal is not None and todo else None
        try:
            if jobs > 1 and len(todo) > 1:
                with ProcessPoolExecutor(max_workers=jobs) as ex:
                    results = ex.map(assess_task, todo, chunksize=16)
                    _collect(results, todo, done, jfh, n, len(models), progress)
            else:
                _collect(map(assess_task, todo), todo, done, jfh, n, len(models), progress)
        finally:
            if jfh is not None:
                jfh.close()
        wanted = {model_key(m) for m in models}
        lines = [done[k] for k in sorted(done) if k in wanted]
        if shard is not None:
            _write_lines(shard, lines)
            if journal.exists():
                journal.unlink()
        records += [record_from_line(line) for line in lines]
    manifest = {
        "max_nodes": max_nodes,
        "engine": f"compartdb {__version__}",
        "config": _config_dict(cfg),
    }
    db = Database(records, manifest)
    db.manifest["counts"] = db.counts()
    if out_dir is not None:
        db.save(out_dir)
    return db


def _collect(results, todo, done, jfh, n, total, progress):
    finished = total - len(todo)
    for (text, key, _), (line, secs) in zip(todo, results):
        if secs > HOTSPOT_SECONDS:
            log.warning("hotspot: %s took %.1f s", text, secs)
        done[key] = line
        if jfh is not None:
            jfh.write(line + "\n")
            jfh.flush()
        finished += 1
        if progress is not None:
            progress(n, finished, total)
