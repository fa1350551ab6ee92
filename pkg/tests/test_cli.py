import json
import subprocess
import sys

import pytest

from rsprkernel import cli
from rsprkernel.forests import AgreementForest, is_agreement_forest
from rsprkernel.newick_io import parse_graph, parse_tree, write_graph
from rsprkernel.tight import build_tight


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


@pytest.fixture
def pair(tmp_path):
    return _write(tmp_path, "a.nwk", "((a,b),(c,d));\n"), _write(tmp_path, "b.nwk", "((a,c),(b,d));\n")


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_distance_json(pair, capsys):
    code, out, err = _run(capsys, "distance", *pair)
    data = json.loads(out)
    assert code == 0 and data["d"] == 2 and len(data["certificate"]) == 3
    assert "d = 2" in err
    t1, t2 = (parse_tree(open(p).read()) for p in pair)
    assert is_agreement_forest(t1, t2, AgreementForest.from_blocks(data["certificate"]))
    code, out, _ = _run(capsys, "distance", *pair, "--method", "oracle", "--mode", "hybridization", "--format", "text")
    assert code == 0 and out == "2\n"


def test_kernelize_round_trip(pair, capsys):
    code, out, _ = _run(capsys, "kernelize", *pair)
    data = json.loads(out)
    assert code == 0 and data["leaves"] <= 4
    s1, s2 = parse_tree(data["s1"]), parse_tree(data["s2"])
    assert s1.taxa == s2.taxa
    code, out, _ = _run(capsys, "kernelize", *pair, "--format", "newick")
    assert [parse_tree(line) for line in out.split()] == [s1, s2]


def test_multiple_pairs(tmp_path, capsys):
    a = _write(tmp_path, "a.nwk", "((a,b),c);\n# comment\n((a,b),(c,d));\n")
    b = _write(tmp_path, "b.nwk", "((a,c),b);\n\n((a,c),(b,d));\n")
    code, out, _ = _run(capsys, "distance", a, b, "--format", "text")
    assert code == 0 and out == "1\n2\n"


def test_verify(pair, capsys, monkeypatch):
    code, out, _ = _run(capsys, "verify", *pair)
    assert code == 0 and json.loads(out)["holds"]
    monkeypatch.setattr(cli, "kernel_bound", lambda d, mode: 0)
    code, out, err = _run(capsys, "verify", *pair)
    assert code == 4 and "VIOLATED" in err


def test_input_errors(tmp_path, pair, capsys):
    bad = _write(tmp_path, "bad.nwk", "((a,b),c;\n")
    assert _run(capsys, "distance", bad, pair[1])[0] == 2
    other = _write(tmp_path, "c.nwk", "((a,b),(c,e));\n")
    assert _run(capsys, "distance", pair[0], other)[0] == 2
    code, _, err = _run(capsys, "distance", pair[0], str(tmp_path / "missing.nwk"))
    assert code == 2 and "cannot read" in err


def test_resource_limits(tmp_path, capsys):
    fam = build_tight(3)
    from rsprkernel.newick_io import write_tree

    a = _write(tmp_path, "s1.nwk", write_tree(fam.s1) + "\n")
    b = _write(tmp_path, "s2.nwk", write_tree(fam.s2) + "\n")
    assert _run(capsys, "distance", a, b, "--depth-cap", "2")[0] == 3
    assert _run(capsys, "distance", a, b, "--method", "oracle")[0] == 3


def test_tight_outputs(tmp_path, capsys):
    out_dir = tmp_path / "k2"
    code, _, err = _run(capsys, "tight", "--k", "2", "--out", str(out_dir))
    assert code == 0 and "tight" in err
    names = {p.name for p in out_dir.iterdir()}
    assert names == {"s1.nwk", "s2.nwk", "graph.txt", "graph.dot", "generator.dot", "report.json"}
    report = json.loads((out_dir / "report.json").read_text())
    assert report["report"]["tight"] and report["report"]["leaf_count"] == 15
    g = parse_graph((out_dir / "graph.txt").read_text())
    assert write_graph(g) == (out_dir / "graph.txt").read_text()
    code, out, _ = _run(capsys, "tight", "--k", "2", "--format", "dot")
    assert out.startswith("digraph")
    code, out, _ = _run(capsys, "tight", "--k", "1")
    assert code == 0 and json.loads(out)["warning"]
    assert _run(capsys, "tight", "--k", "0")[0] == 2


def test_display(tmp_path, capsys):
    fam = build_tight(2)
    from rsprkernel.newick_io import write_tree

    g = _write(tmp_path, "g.txt", write_graph(fam.graph))
    t = _write(tmp_path, "t.nwk", write_tree(fam.s1) + "\n")
    code, out, _ = _run(capsys, "display", g, t)
    data = json.loads(out)
    assert code == 0 and data["displayed"] and data["reticulations"] == 2
    broken = _write(tmp_path, "broken.txt", "graph 3 2 root=0\n0 1\n1 2\nlabel 0 __rho__\nlabel 2 a\n")
    code, _, err = _run(capsys, "display", broken, t)
    assert code == 2


def test_module_entry_point(pair):
    proc = subprocess.run(
        [sys.executable, "-m", "rsprkernel", "distance", *pair, "--format", "text"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "2\n"


def test_worker_processes(pair, capsys, monkeypatch, tmp_path):
    a = _write(tmp_path, "m1.nwk", "((a,b),(c,d));\n((a,b),c);\n")
    b = _write(tmp_path, "m2.nwk", "((a,c),(b,d));\n((a,c),b);\n")
    monkeypatch.setenv(cli.THREADS_ENV, "2")
    code, out, _ = _run(capsys, "distance", a, b, "--format", "text")
    assert code == 0 and out == "2\n1\n"
