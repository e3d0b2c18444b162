"""``compartdb`` command line.

Exit codes: 0 success, 1 usage error, 2 model parse error, 3 model not in
database, 4 assessment undetermined or internal failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .algebra.fields import CONFIRM_PRIME, DEFAULT_PRIME
from .analysis import check_conjecture_4_5, edge_input_report, grid_to_csv, heatmap_grid, stats_by
from .enumerate import EnumerationConfig, enumerate_models
from .identifiability import DEFAULT_SEED, AssessConfig, UndeterminedError
from .ioeq import io_equation, to_ode_system
from .model import ModelError, canonicalize, format_model, parse_model
from .modeldb import (
    Database,
    ModelNotFound,
    assess_task,
    all_of,
    all_status,
    build,
    class_is,
    has_status,
    inputs_count,
    is_strongly_connected,
    leaks_count,
    n_is,
)

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_NOT_FOUND, EXIT_INTERNAL = 0, 1, 2, 3, 4

STATUS_CHOICES = ["globally", "locally", "nonidentifiable"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _open_out(name: str):
    if name == "-":
        return sys.stdout, False
    return open(name, "w", encoding="utf-8", newline="\n"), True


def _config(args) -> AssessConfig:
    return AssessConfig(
        prime=args.prime, prime2=args.prime2, seed=args.seed, max_trials=args.trials,
        strategy=args.strategy,
    )


def _load_db(args) -> Database:
    if not args.db:
        raise UsageError("--db is required")
    return Database.load(args.db)


def _emit_result(model_text: str, result, fmt: str, out) -> None:
    params = {k.name: v.value for k, v in sorted(result.items())}
    if fmt == "json":
        out.write(json.dumps({"model": model_text, "params": params}, sort_keys=True) + "\n")
    else:
        out.write(f"{model_text}\n")
        for name, status in params.items():
            out.write(f"  {name}: {status}\n")


# -- subcommands --------------------------------------------------------------------


def cmd_generate(args) -> int:
    n = args.nodes
    cfg = EnumerationConfig(n, max_inputs=min(args.max_inputs, n))
    out, close = _open_out(args.out)
    try:
        for m in enumerate_models(cfg):
            out.write(format_model(m) + "\n")
    finally:
        if close:
            out.close()
    return EXIT_OK


def cmd_assess(args) -> int:
    cfg = _config(args)
    src = sys.stdin if args.infile == "-" else open(args.infile, encoding="utf-8")
    with src:
        models = [parse_model(line.strip()) for line in src if line.strip()]
    tasks = []
    for m in models:
        cf = canonicalize(m)
        tasks.append((format_model(cf.canonical), cf.key, cfg))
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(assess_task, tasks, chunksize=8))
    else:
        results = [assess_task(t) for t in tasks]
    out, close = _open_out(args.out)
    try:
        for line, _ in results:
            out.write(line + "\n")
    finally:
        if close:
            out.close()
    return EXIT_OK


def cmd_build(args) -> int:
    if not args.db:
        raise UsageError("--db is required")

    def progress(n, done, total):
        if not args.quiet and (done % 500 == 0 or done == total):
            print(f"n={n}: {done}/{total}", file=sys.stderr)

    db = build(args.max_nodes, _config(args), args.db, jobs=args.jobs, progress=progress)
    print(json.dumps(db.manifest["counts"], sort_keys=True))
    return EXIT_OK


def cmd_query(args) -> int:
    db = _load_db(args)
    m = parse_model(args.model)
    _emit_result(format_model(m), db.get(m), args.format, sys.stdout)
    return EXIT_OK


def cmd_filter(args) -> int:
    db = _load_db(args)
    preds = []
    if args.nodes is not None:
        preds.append(n_is(args.nodes))
    if args.inputs is not None:
        preds.append(inputs_count(args.inputs))
    if args.leaks is not None:
        preds.append(leaks_count(args.leaks))
    if args.strongly_connected is not None:
        preds.append(is_strongly_connected(args.strongly_connected))
    for s in args.has_status or []:
        preds.append(has_status(s))
    if args.all_status:
        preds.append(all_status(args.all_status))
    if args.model_class:
        preds.append(class_is(args.model_class))
    for m, r in db.filterby(all_of(*preds)):
        _emit_result(format_model(m), r, args.format, sys.stdout)
    return EXIT_OK


def cmd_explain(args) -> int:
    m = parse_model(args.model)
    print(f"model: {format_model(m)}")
    print("ode system:")
    for line in str(to_ode_system(m)).splitlines():
        print(f"  {line}")
    print("input-output equations:")
    for o in sorted(m.outputs):
        print(f"  {io_equation(m, o)}")
    return EXIT_OK


def cmd_stats(args) -> int:
    db = _load_db(args)
    table = stats_by(db, args.by)
    if args.format == "csv":
        sys.stdout.write(table.to_csv())
    else:
        rows = [
            {"group": list(g), "counts": dict(zip(["globally", "locally", "nonidentifiable"], table.row(*g)))}
            for g in sorted(table.cells)
        ]
        sys.stdout.write(json.dumps({"by": args.by, "rows": rows}, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_heatmap(args) -> int:
    from .plotting import render_heatmap

    db = _load_db(args)
    grid = heatmap_grid(db, args.model_class)
    out = Path(args.out)
    out.with_suffix(".csv").write_text(grid_to_csv(grid))
    render_heatmap(grid, out, args.model_class)
    if not args.quiet:
        sys.stdout.write(grid_to_csv(grid))
    return EXIT_OK


def cmd_check_conjecture(args) -> int:
    db = _load_db(args)
    found = check_conjecture_4_5(db, args.max_nodes, _config(args))
    if args.format == "json":
        for c in found:
            sys.stdout.write(json.dumps(c.to_dict(), sort_keys=True) + "\n")
    else:
        print(f"{len(found)} counterexample(s) with at most {args.max_nodes} nodes")
        for c in found:
            d = c.to_dict()
            print(f"{d['model']}")
            print(f"  before: {d['before']}")
            print(f"  after:  {d['after']}")
    return EXIT_OK


def cmd_edge_report(args) -> int:
    db = _load_db(args)
    sys.stdout.write(json.dumps(edge_input_report(db, args.max_nodes), sort_keys=True) + "\n")
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--db", help="database directory")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--quiet", action="store_true")
    common.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    common.add_argument("--prime2", type=int, default=CONFIRM_PRIME)
    common.add_argument("--trials", type=int, default=6, help="maximum trials per model")
    common.add_argument(
        "--strategy", choices=["auto", "full", "sliced"], default="auto",
        help="Groebner route: full fiber, or fiber sliced by a transcendence basis",
    )

    p = _Parser(prog="compartdb", description="Linear compartment model identifiability database")
    p.add_argument("--version", action="version", version=f"compartdb {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="enumerate canonical models")
    g.add_argument("--nodes", type=int, required=True)
    g.add_argument("--max-inputs", type=int, default=2)
    g.add_argument("--out", default="-")
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("assess", parents=[common], help="assess models listed one per line")
    a.add_argument("--in", dest="infile", required=True)
    a.add_argument("--out", default="-")
    a.set_defaults(func=cmd_assess)

    b = sub.add_parser("build", parents=[common], help="build (or resume) a database")
    b.add_argument("--max-nodes", type=int, default=3)
    b.set_defaults(func=cmd_build)

    q = sub.add_parser("query", parents=[common], help="look up one model")
    q.add_argument("--model", required=True)
    q.add_argument("--format", choices=["json", "text"], default="json")
    q.set_defaults(func=cmd_query)

    f = sub.add_parser("filter", parents=[common], help="list records matching all conditions")
    f.add_argument("--nodes", type=int)
    f.add_argument("--inputs", type=int)
    f.add_argument("--leaks", type=int)
    sc = f.add_mutually_exclusive_group()
    sc.add_argument("--strongly-connected", dest="strongly_connected", action="store_true", default=None)
    sc.add_argument("--not-strongly-connected", dest="strongly_connected", action="store_false")
    f.add_argument("--has-status", action="append", choices=STATUS_CHOICES)
    f.add_argument("--all-status", choices=STATUS_CHOICES)
    f.add_argument("--class", dest="model_class", choices=STATUS_CHOICES)
    f.add_argument("--format", choices=["json", "text"], default="json")
    f.set_defaults(func=cmd_filter)

    e = sub.add_parser("explain", parents=[common], help="print ODE system and IO equations")
    e.add_argument("--model", required=True)
    e.set_defaults(func=cmd_explain)

    s = sub.add_parser("stats", parents=[common], help="class counts grouped by a dimension")
    s.add_argument("--by", choices=["nodes", "leaks", "inputs", "leaks_inputs"], default="nodes")
    s.add_argument("--format", choices=["csv", "json"], default="csv")
    s.set_defaults(func=cmd_stats)

    h = sub.add_parser("heatmap", parents=[common], help="inputs x leaks grid as CSV and SVG")
    h.add_argument("--class", dest="model_class", choices=["all"] + STATUS_CHOICES, default="all")
    h.add_argument("--out", required=True, help="figure path; the CSV goes next to it")
    h.set_defaults(func=cmd_heatmap)

    c = sub.add_parser("check-conjecture", parents=[common], help="leak-removal counterexamples")
    c.add_argument("--max-nodes", type=int, default=3)
    c.add_argument("--format", choices=["json", "text"], default="text")
    c.set_defaults(func=cmd_check_conjecture)

    r = sub.add_parser("edge-report", parents=[common], help="statuses of input-fed edges")
    r.add_argument("--max-nodes", type=int, default=3)
    r.set_defaults(func=cmd_edge_report)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"compartdb: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ModelError as exc:
        print(f"compartdb: invalid model: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ModelNotFound as exc:
        print(f"compartdb: model not in database: {exc.args[0]}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except (FileNotFoundError, ValueError) as exc:
        print(f"compartdb: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UndeterminedError, RuntimeError) as exc:
        print(f"compartdb: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
