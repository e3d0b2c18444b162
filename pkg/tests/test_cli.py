import json
import subprocess
import sys

import pytest

from compartdb.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_generate_two_nodes(capsys):
    code, out, _ = run(capsys, "generate", "--nodes", "2", "--out", "-")
    assert code == 0 and len(out.splitlines()) == 32


def test_query_listing_row(capsys, db3_dir):
    code, out, _ = run(capsys, "query", "--db", str(db3_dir), "--model", "graph=[[],[0]];in=[0];out=[0];leak=[0]")
    assert code == 0
    assert json.loads(out)["params"] == {"a(1->0)": "globally", "leak(0)": "globally"}


def test_query_text(capsys, db3_dir):
    code, out, _ = run(capsys, "query", "--db", str(db3_dir), "--format", "text",
                       "--model", "graph=[[1],[0]];in=[0];out=[1];leak=[0]")
    assert code == 0
    assert out.splitlines()[1:] == ["  a(0->1): globally", "  a(1->0): locally", "  leak(0): locally"]


def test_exit_codes(capsys, db3_dir):
    db = str(db3_dir)
    assert run(capsys, "query", "--db", db, "--model", "graph=[[0]];in=[0];out=[0];leak=[]")[0] == 2
    assert run(capsys, "query", "--db", db, "--model", "graph=[[],[0]];in=[0];out=[1];leak=[]")[0] == 3
    assert run(capsys, "query", "--model", "graph=[[],[0]];in=[0];out=[0];leak=[]")[0] == 1
    with pytest.raises(SystemExit) as exc:
        main(["query", "--bogus"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["filter", "--db", db, "--strongly-connected", "--not-strongly-connected"])
    assert exc.value.code == 1


def test_filter_json_lines(capsys, db3_dir):
    code, out, _ = run(capsys, "filter", "--db", str(db3_dir), "--nodes", "2", "--leaks", "1",
                       "--has-status", "globally")
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    assert len(rows) == 11


@pytest.mark.parametrize(
    "argv",
    [
        ["stats", "--by", "nodes", "--format", "json"],
        ["check-conjecture", "--max-nodes", "3", "--format", "json"],
        ["edge-report"],
        ["filter", "--class", "locally", "--nodes", "2", "--format", "json"],
    ],
)
def test_json_output_parses(capsys, db3_dir, argv):
    code, out, _ = run(capsys, *argv, "--db", str(db3_dir))
    assert code == 0
    for line in out.splitlines():
        json.loads(line)


def test_stats_csv(capsys, db3_dir):
    _, out, _ = run(capsys, "stats", "--db", str(db3_dir))
    assert out.splitlines() == [
        "nodes,globally,locally,nonidentifiable",
        "2,19,3,10",
        "3,228,137,555",
    ]


def test_check_conjecture_text(capsys, db3_dir):
    _, out, _ = run(capsys, "check-conjecture", "--db", str(db3_dir))
    assert out.splitlines()[0] == "5 counterexample(s) with at most 3 nodes"


def test_deterministic_output(capsys, db3_dir):
    argv = ["filter", "--db", str(db3_dir), "--nodes", "3", "--class", "locally"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_assess_matches_database(capsys, tmp_path, db3_dir):
    src = tmp_path / "models.txt"
    src.write_text("graph=[[1],[0]];in=[0];out=[1];leak=[0]\n")
    code, out, _ = run(capsys, "assess", "--in", str(src))
    assert code == 0
    rec = json.loads(out)
    assert sorted(rec["params"].values()) == ["globally", "locally", "locally"]


def test_explain(capsys):
    code, out, _ = run(capsys, "explain", "--model", "graph=[[],[0]];in=[0];out=[0];leak=[0]")
    assert code == 0
    assert "y0'' + (a(1->0) + leak(0))*y0' + a(1->0)*leak(0)*y0 = u0' + a(1->0)*u0" in out


def test_heatmap_files(capsys, db3_dir, tmp_path):
    fig = tmp_path / "all.svg"
    code, out, _ = run(capsys, "heatmap", "--db", str(db3_dir), "--out", str(fig))
    assert code == 0
    assert fig.read_text().lstrip().startswith("<?xml")
    csv_text = (tmp_path / "all.csv").read_text()
    assert csv_text == out
    first = fig.read_bytes()
    run(capsys, "heatmap", "--db", str(db3_dir), "--out", str(fig))
    assert fig.read_bytes() == first


def test_build_command(capsys, tmp_path):
    code, out, _ = run(capsys, "build", "--db", str(tmp_path / "d"), "--max-nodes", "2", "--quiet")
    assert code == 0 and json.loads(out) == {"2": 32}


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "compartdb.cli", "generate", "--nodes", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and len(proc.stdout.splitlines()) == 32
