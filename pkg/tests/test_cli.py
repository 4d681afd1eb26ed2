import json

import numpy as np
import pytest

from hgwl.cli import run
from hgwl.io import load_dataset, load_matrix


@pytest.fixture
def dataset(tmp_path):
    path = tmp_path / "ds.jsonl"
    assert run(["generate", "--family", "rhg-3", "--count", "60", "--seed", "2021", "--out", str(path)]) == 0
    return path


def single(tmp_path, name, record):
    p = tmp_path / name
    p.write_text(json.dumps(record) + "\n")
    return str(p)


def test_generate(dataset, capsys, tmp_path):
    ds = load_dataset(dataset)
    assert len(ds) == 60 and set(ds.targets) == {0, 1, 2}
    again = tmp_path / "again.jsonl"
    run(["generate", "--family", "rhg-3", "--count", "60", "--seed", "2021", "--out", str(again)])
    assert again.read_bytes() == dataset.read_bytes()


def test_gram_normalized(dataset, tmp_path, capsys):
    out = tmp_path / "K.csv"
    assert run(["gram", "--in", str(dataset), "--kind", "subtree", "--h", "3", "--normalize", "--out", str(out)]) == 0
    km = load_matrix(out)
    assert km.normalized and km.n == 60
    assert np.array_equal(np.diag(km.values), np.ones(60))
    assert "n=60" in capsys.readouterr().out


def test_gram_workers_identical(dataset, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(["gram", "--in", str(dataset), "--kind", "hyperedge", "--out", str(a)])
    run(["gram", "--in", str(dataset), "--kind", "hyperedge", "--workers", "3", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_featurize_sorted_listing(dataset, capsys):
    assert run(["featurize", "--in", str(dataset), "--kind", "subtree", "--h", "1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 60
    rec = json.loads(lines[0])
    keys = [(i, lid) for i, _, lid, _ in rec["features"]]
    assert keys == sorted(keys)
    assert {tag for _, tag, _, _ in rec["features"]} == {"subtree-label"}


def test_test_iso(tmp_path, capsys):
    a = single(tmp_path, "a.jsonl", {"id": "a", "num_vertices": 3, "hyperedges": [[0, 1], [0, 1, 2]], "target": 0})
    b = single(tmp_path, "b.jsonl", {"id": "b", "num_vertices": 3, "hyperedges": [[1, 2], [0, 1, 2]], "target": 0})
    c = single(tmp_path, "c.jsonl", {"id": "c", "num_vertices": 3, "hyperedges": [[0, 1, 2]], "target": 0})
    assert run(["test-iso", "--a", a, "--b", b, "--h", "3"]) == 0
    assert capsys.readouterr().out.strip() == "possibly-isomorphic"
    assert run(["test-iso", "--a", a, "--b", c, "--h", "3"]) == 0
    assert capsys.readouterr().out.strip() == "non-isomorphic decided_at=0"


def test_test_iso_needs_single_record(dataset, tmp_path):
    assert run(["test-iso", "--a", str(dataset), "--b", str(dataset)]) == 1


def test_classify(dataset, capsys):
    assert run(["classify", "--in", str(dataset), "--kind", "subtree", "--h", "2", "--seeds", "2021-2022"]) == 0
    out = capsys.readouterr().out
    assert "seeds=2021,2022" in out and "accuracy" in out and "macro_f1" in out


def test_classify_deterministic(dataset, capsys):
    argv = ["classify", "--in", str(dataset), "--kind", "hyperedge", "--seeds", "2021,2023"]
    run(argv)
    first = capsys.readouterr().out
    run(argv + ["--workers", "2"])
    assert capsys.readouterr().out == first


def test_bench(capsys):
    assert run(["bench", "--sweep", "vertices", "--values", "20,40", "--count", "3"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "sweep,value,num_hypergraphs,num_vertices,num_hyperedges,kind,seconds"
    assert len(lines) == 5
    assert lines[1].startswith("vertices,20,3,20,100,subtree,")


@pytest.mark.parametrize("argv", [
    [], ["nope"], ["generate", "--family", "rhg-3"], ["gram", "--in", "x", "--kind", "banana", "--out", "y"],
    ["bench", "--sweep", "degree", "--unknown"],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == 2
    assert "error" in capsys.readouterr().err


def test_validation_errors(tmp_path, capsys):
    bad = single(tmp_path, "bad.jsonl", {"id": "r1", "num_vertices": 2, "hyperedges": [[0, 9]], "target": 0})
    assert run(["gram", "--in", bad, "--kind", "subtree", "--out", str(tmp_path / "k.csv")]) == 1
    assert "r1" in capsys.readouterr().err
    assert run(["gram", "--in", str(tmp_path / "missing.jsonl"), "--kind", "subtree", "--out", "k"]) == 1
    assert run(["generate", "--family", "rhg-3", "--count", "0", "--seed", "1", "--out", str(tmp_path / "z")]) == 1


def test_graph_subtree_needs_graphs(dataset, tmp_path):
    assert run(["gram", "--in", str(dataset), "--kind", "graph-subtree", "--out", str(tmp_path / "g.csv")]) == 1
