"""Acceptance gate: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (lines appear in the
terminal summary) or ``python tests/test_acceptance.py``.  Criterion 6
needs a full four-node database: set ``COMPARTDB_FULL=1`` and optionally
``COMPARTDB_DB4=<dir>`` to reuse a finished build.
"""

import ast
import os
import random
import re
import time
from pathlib import Path

import pytest

from compartdb.algebra import PolyRing, PrimeField, buchberger, normal_form, spoly
from compartdb.analysis import check_conjecture_4_5, stats_by
from compartdb.enumerate import EnumerationConfig, enumerate_models
from compartdb.identifiability import AssessConfig, CounterRNG, IdStatus, RankVerdict, assess, assess_labeled
from compartdb.identifiability import groebner_classify, jacobian_test
from compartdb.ioeq import model_coefficient_map
from compartdb.model import canonicalize, format_model, model_key, parse_model, relabel, relabel_result, remove_leak, validate
from compartdb.modeldb import Database, all_of, build, has_status, leaks_count, n_is

RESULTS: list[str] = []

# verbatim rows of the two-node listing (model, result)
LISTING = """
Graph: [set(), {0}], Inputs: {0}, Outputs: {0}, Leaks: {0}
{'(0, -1)': 'globally', '(1, 0)': 'globally'}
Graph: [set(), {0}], Inputs: {1}, Outputs: {0}, Leaks: {0}
{'(0, -1)': 'globally', '(1, 0)': 'globally'}
Graph: [set(), {0}], Inputs: {1}, Outputs: {0}, Leaks: {1}
{'(1, -1)': 'globally', '(1, 0)': 'globally'}
Graph: [{1}, {0}], Inputs: {0}, Outputs: {0}, Leaks: {0}
{'(0, -1)': 'globally', '(0, 1)': 'globally', '(1, 0)': 'globally'}
Graph: [{1}, {0}], Inputs: {0}, Outputs: {0}, Leaks: {1}
{'(1, -1)': 'globally', '(0, 1)': 'globally', '(1, 0)': 'globally'}
Graph: [{1}, {0}], Inputs: {0}, Outputs: {1}, Leaks: {0}
{'(0, -1)': 'locally', '(0, 1)': 'globally', '(1, 0)': 'locally'}
Graph: [{1}, {0}], Inputs: {0}, Outputs: {1}, Leaks: {1}
{'(1, -1)': 'globally', '(0, 1)': 'globally', '(1, 0)': 'globally'}
Graph: [set(), {0}], Inputs: {0, 1}, Outputs: {0}, Leaks: {0}
{'(0, -1)': 'globally', '(1, 0)': 'globally'}
Graph: [set(), {0}], Inputs: {0, 1}, Outputs: {0}, Leaks: {1}
{'(1, -1)': 'globally', '(1, 0)': 'globally'}
Graph: [{1}, {0}], Inputs: {0, 1}, Outputs: {0}, Leaks: {0}
{'(0, -1)': 'globally', '(0, 1)': 'globally', '(1, 0)': 'globally'}
Graph: [{1}, {0}], Inputs: {0, 1}, Outputs: {0}, Leaks: {1}
{'(1, -1)': 'globally', '(0, 1)': 'globally', '(1, 0)': 'globally'}
"""

COUNTEREXAMPLES = [
    "graph=[[1],[0,2],[0,1]];in=[0,1];out=[1];leak=[0]",
    "graph=[[1],[0,2],[0,1]];in=[0,1];out=[2];leak=[0]",
    "graph=[[1],[0,2],[0,1]];in=[0,2];out=[2];leak=[0]",
    "graph=[[1,2],[0,2],[0,1]];in=[0,1];out=[0];leak=[1]",
    "graph=[[1,2],[0,2],[0,1]];in=[0,1];out=[2];leak=[0]",
]

FIG3 = {
    "nodes": {(2,): (19, 3, 10), (3,): (228, 137, 555), (4,): (5143, 7925, 59396)},
    "leaks": {
        (0,): (528, 882, 3329),
        (1,): (2692, 3302, 12480),
        (2,): (2042, 3324, 21990),
        (3,): (128, 557, 17549),
        (4,): (0, 0, 4613),
    },
    "inputs": {(0,): (1, 13, 6866), (1,): (190, 1375, 25243), (2,): (5199, 6677, 27852)},
}


def record(num, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def parse_listing_model(line):
    m = re.match(r"Graph: (.*), Inputs: (.*), Outputs: (.*), Leaks: (.*)", line)
    graph, ins, outs, leaks = (ast.literal_eval(g.replace("set()", "[]").replace("{", "[").replace("}", "]")) for g in m.groups())
    edges = [(i, j) for i, succ in enumerate(graph) for j in succ]
    return validate(len(graph), edges, ins, outs, leaks)


# -- 1 ------------------------------------------------------------------------------


def test_criterion_1_enumeration_counts():
    want = {2: 32, 3: 920, 4: 72464}
    got, secs = {}, {}
    for n in want:
        t0 = time.perf_counter()
        got[n] = sum(1 for _ in enumerate_models(EnumerationConfig(n)))
        secs[n] = time.perf_counter() - t0
    total = sum(got.values())
    ok = got == want and total == 73416 and secs[2] + secs[3] < 1 and secs[4] < 60
    record(
        1, ok,
        f"counts {got} (want {want}), total {total} (want 73416), "
        f"n<=3 {secs[2] + secs[3]:.2f}s (<1s), n=4 {secs[4]:.1f}s (<60s)",
    )


# -- 2 ------------------------------------------------------------------------------


def test_criterion_2_two_node_listing():
    t0 = time.perf_counter()
    db = build(2, AssessConfig())
    found = list(db.filterby(all_of(n_is(2), leaks_count(1), has_status("globally"))))
    lines = LISTING.strip().splitlines()
    mismatches = []
    listed = set()
    for mline, rline in zip(lines[::2], lines[1::2]):
        m = parse_listing_model(mline)
        listed.add(canonicalize(m).key)
        got = {k.tuple_name: v.value for k, v in db.get(m).items()}
        if got != ast.literal_eval(rline):
            mismatches.append((mline, got))
    classes = {canonicalize(m).key for m, _ in found}
    secs = time.perf_counter() - t0
    ok = len(found) == 11 and classes == listed and not mismatches and secs < 10
    record(2, ok, f"{len(found)} classes (want 11), same classes as listing: {classes == listed}, "
                  f"status mismatches {len(mismatches)}, {secs:.1f}s (<10s)")


# -- 3 ------------------------------------------------------------------------------


def test_criterion_3_figure_2():
    t0 = time.perf_counter()
    r = assess(validate(3, [(0, 2), (1, 2)], outputs=[2])).statuses
    secs = time.perf_counter() - t0
    ok = set(r.values()) == {IdStatus.LOCALLY} and len(r) == 2 and secs < 1
    record(3, ok, f"{ {k.name: v.value for k, v in r.items()} }, {secs:.2f}s (<1s)")


# -- 4 ------------------------------------------------------------------------------


def test_criterion_4_small_statistics(db3):
    t = stats_by(db3, "nodes")
    rows = {n: t.row(n) for n in (2, 3)}
    ok = rows == {2: (19, 3, 10), 3: (228, 137, 555)}
    record(4, ok, f"nodes rows {rows} (want 2: (19, 3, 10), 3: (228, 137, 555))")


# -- 5 ------------------------------------------------------------------------------


def test_criterion_5_leak_removal(db3):
    found = check_conjecture_4_5(db3, 3)
    want = sorted(canonicalize(parse_model(s)).key for s in COUNTEREXAMPLES)
    got = sorted(canonicalize(c.model).key for c in found)
    all_global = all(set(c.before.values()) == {IdStatus.GLOBALLY} for c in found)
    third = parse_model(COUNTEREXAMPLES[2])
    before = db3.get(third)
    after = db3.get(remove_leak(third, 0))
    third_ok = set(before.values()) == {IdStatus.GLOBALLY} and set(after.values()) == {IdStatus.NONIDENTIFIABLE}
    ok = len(found) == 5 and got == want and all_global and third_ok
    record(5, ok, f"{len(found)} counterexamples (want 5), isomorphic to listed: {got == want}, "
                  f"all globally before: {all_global}, third fully non-identifiable after: {third_ok}")


# -- 6 ------------------------------------------------------------------------------


def test_criterion_6_full_statistics(tmp_path_factory):
    if os.environ.get("COMPARTDB_FULL") != "1":
        RESULTS.append("[SKIP] criterion 6: four-node build is long-running; set COMPARTDB_FULL=1")
        pytest.skip("set COMPARTDB_FULL=1")
    path = os.environ.get("COMPARTDB_DB4")
    if path and (Path(path) / "n4.jsonl").exists():
        db = Database.load(path)
    else:
        db = build(4, AssessConfig(), path or tmp_path_factory.mktemp("db4"))
    problems = []
    for dim, rows in FIG3.items():
        t = stats_by(db, dim)
        for g, want in rows.items():
            if t.row(*g) != want:
                problems.append(f"{dim}{list(g)}: {t.row(*g)} vs {want}")
    totals = tuple(sum(stats_by(db, "nodes").row(n)[i] for n in (2, 3, 4)) for i in range(3))
    if totals != (5390, 8065, 59961):
        problems.append(f"totals {totals} vs (5390, 8065, 59961)")
    record(6, not problems, "Figure 3 tables and totals reproduced" if not problems else "; ".join(problems))


# -- 7 ------------------------------------------------------------------------------


def _corpus3():
    return [m for n in (2, 3) for m in enumerate_models(EnumerationConfig(n))]


def test_criterion_7a_canonicalization():
    rnd = random.Random(41)
    bad = 0
    for _ in range(300):
        n = rnd.randint(1, 4)
        edges = [(i, j) for i in range(n) for j in range(n) if i != j and rnd.random() < 0.4]
        pick = lambda: [v for v in range(n) if rnd.random() < 0.4]  # noqa: E731
        m = validate(n, edges, pick(), pick(), pick())
        cf = canonicalize(m)
        perm = rnd.sample(range(n), n)
        if canonicalize(cf.canonical).canonical != cf.canonical or canonicalize(relabel(m, perm)).key != cf.key:
            bad += 1
    record("7a", bad == 0, f"canonicalization idempotent and isomorphism-invariant on 300 random models x permutations ({bad} failures)")


def test_criterion_7b_relabel_equivariance():
    rnd = random.Random(43)
    bad = 0
    for m in rnd.sample(_corpus3(), 60):
        perm = rnd.sample(range(m.n), m.n)
        mp = relabel(m, perm)
        r1 = assess_labeled(m, key=format_model(m)).statuses
        r2 = assess_labeled(mp, key=format_model(mp)).statuses
        bad += relabel_result(r1, perm) != r2
    record("7b", bad == 0, f"assess equivariant under relabeling on 60 models ({bad} failures)")


def test_criterion_7c_method_agreement():
    p = 2147483647
    corpus = _corpus3()
    bad = 0
    for m in corpus:
        cm = model_coefficient_map(m)
        rng = CounterRNG("accept", model_key(m))
        point = [rng.nonzero(p) for _ in range(cm.ring.nvars)]
        jac = [v is RankVerdict.NONIDENTIFIABLE for v in jacobian_test(cm, point, p)]
        gb = [s is IdStatus.NONIDENTIFIABLE for s in groebner_classify(cm, point, p, rng).statuses]
        bad += jac != gb
    record("7c", bad == 0, f"Jacobian and Groebner non-identifiable sets agree on all {len(corpus)} models with n <= 3 ({bad} disagreements)")


def test_criterion_7d_spoly_reduction():
    rnd = random.Random(47)
    F = PrimeField(10007)
    R = PolyRing(["x", "y", "z"], F)
    bad = 0
    for _ in range(30):
        gens = []
        for _ in range(rnd.randint(1, 3)):
            terms = {tuple(rnd.randint(0, 2) for _ in range(3)): rnd.randint(1, 10006) for _ in range(rnd.randint(1, 4))}
            gens.append(R.from_dict(terms))
        G = buchberger(gens)
        bad += any(normal_form(spoly(G[i], G[j]), G) for i in range(len(G)) for j in range(i + 1, len(G)))
    record("7d", bad == 0, f"S-polynomials of 30 random bases reduce to zero ({bad} failures)")


def test_criterion_7e_determinant_checks():
    from test_ioeq import test_bareiss_cross_check, test_trace_and_constant_term

    try:
        test_trace_and_constant_term()
        test_bareiss_cross_check()
        ok, detail = True, "trace identity on 100 and Bareiss cross-check on 200 random models"
    except AssertionError as exc:
        ok, detail = False, f"determinant check failed: {exc}"
    record("7e", ok, detail)


def test_criterion_7f_seed_independence(db3):
    other = build(3, AssessConfig(seed=7, prime=1000000007, prime2=998244353))
    diff = sum(1 for m, r in db3 if other.get(m) != r)
    record("7f", diff == 0, f"statuses for all {len(db3)} models with n <= 3 unchanged under another seed and prime pair ({diff} differ)")


def test_criterion_7g_round_trip(db3_dir, tmp_path):
    Database.load(db3_dir).save(tmp_path / "copy")
    names = sorted(p.name for p in Path(db3_dir).iterdir())
    same = all((tmp_path / "copy" / n).read_bytes() == (Path(db3_dir) / n).read_bytes() for n in names)
    record("7g", same, f"save/load reproduces {names} byte for byte")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
