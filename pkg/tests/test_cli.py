import json

import numpy as np
import pytest

from conceptnorm.cli import main
from conceptnorm.errors import DimTooSmall
from conceptnorm.synth import concept_directions, synth_fixture


def run(args):
    return main([str(a) for a in args])


@pytest.fixture()
def pipeline_dir(tmp_path):
    """synth -> ingest -> pool artifacts shared by the CLI tests."""
    corpus = tmp_path / "corpus.tsv"
    tokens = tmp_path / "tokens.jsonl"
    index = tmp_path / "index.json"
    store = tmp_path / "store.jsonl"
    assert run(["synth", "--seed", 7, "--concepts", 5, "--terms", 8, "--dim", 32,
                "--sigma", 0.05, "--out-corpus", corpus, "--out-tokens", tokens,
                "--out-planted", tmp_path / "planted.json"]) == 0
    assert run(["ingest", "--corpus", corpus, "--out", index]) == 0
    assert run(["pool", "--tokens", tokens, "--out", store]) == 0
    return tmp_path


def test_synth_counts(tmp_path):
    tsv, jsonl, planted = synth_fixture(7, 5, 8, 32, 0.05)
    assert len(tsv.splitlines()) == 41  # header + 40 rows
    assert len(jsonl.splitlines()) == 41  # meta + 40 records
    assert len(planted) == 5


def test_synth_sigma_zero_degenerate():
    _, jsonl, _ = synth_fixture(3, 2, 4, 8, 0.0)
    vecs = [json.loads(l)["vectors"][0] for l in jsonl.splitlines()[1:]]
    a = np.asarray(vecs[:4])
    assert np.allclose(a, a[0])  # all synonyms identical to the direction


def test_synth_directions_near_orthogonal():
    rng = np.random.default_rng(9)
    dirs = concept_directions(rng, 5, 32)
    gram = dirs @ dirs.T
    off = gram - np.diag(np.diag(gram))
    assert np.abs(off).max() <= 0.1


def test_synth_dim_too_small():
    with pytest.raises(DimTooSmall):
        concept_directions(np.random.default_rng(0), 10, 4)


def test_project_writes_csv(pipeline_dir):
    out = pipeline_dir / "proj.csv"
    assert run(["project", "--vectors", pipeline_dir / "store.jsonl",
                "--n-neighbors", 10, "--min-dist", 0.1, "--seed", 42,
                "--out", out]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "term_id,term,concept,x,y"
    assert len(lines) == 41
    assert (pipeline_dir / "proj.csv.meta.json").exists()


def test_sweep_counts(pipeline_dir):
    out_dir = pipeline_dir / "sweep"
    assert run(["sweep", "--vectors", pipeline_dir / "store.jsonl",
                "--n-neighbors", "5,10,15", "--min-dist", "0.01,0.1,0.5",
                "--epochs", 50, "--seed", 42, "--out-dir", out_dir]) == 0
    assert len(list(out_dir.glob("proj_*.csv"))) == 9


def test_cluster_and_name(pipeline_dir):
    model_path = pipeline_dir / "model.json"
    assert run(["cluster", "--vectors", pipeline_dir / "store.jsonl",
                "--k", 5, "--seed", 42, "--restarts", 10, "--out", model_path]) == 0
    doc = json.loads(model_path.read_text())
    assert len(doc["assignments"]) == 40
    assert len(doc["clusters"]) == 5
    planted = json.loads((pipeline_dir / "planted.json").read_text())
    assert sorted(c["parent"] for c in doc["clusters"]) == sorted(planted.values())

    tree_path = pipeline_dir / "tree.json"
    assert run(["name", "--vectors", pipeline_dir / "store.jsonl",
                "--index", pipeline_dir / "index.json",
                "--out", tree_path, "--dot", pipeline_dir / "tree.dot"]) == 0
    tree = json.loads(tree_path.read_text())
    assert len(tree["clusters"]) == 5
    assert (pipeline_dir / "tree.dot").read_text().startswith("graph")


def test_report_counting_identity(pipeline_dir):
    out_dir = pipeline_dir / "reports"
    assert run(["report", "--store", pipeline_dir / "store.jsonl",
                "--corpus", pipeline_dir / "index.json", "--out-dir", out_dir]) == 0
    sep = json.loads((out_dir / "separation.json").read_text())
    assert sep["n_within"] + sep["n_cross"] == 40 * 39 // 2
    assert (out_dir / "concepts.json").exists()
    assert (out_dir / "concepts.txt").exists()


def test_missing_column_exit_code(tmp_path):
    bad = tmp_path / "bad.tsv"
    bad.write_text("Example\tGeneral SNOMED Label\ns\tx\n")
    assert run(["ingest", "--corpus", bad, "--out", tmp_path / "index.json"]) == 1


def test_usage_error_exit_code():
    assert run(["project"]) == 1  # missing required options


def test_provenance_sidecars(pipeline_dir):
    prov = json.loads((pipeline_dir / "store.jsonl.provenance.json").read_text())
    assert prov["config"]["command"] == "pool"
    assert len(prov["inputs"]) == 1
    for digest in prov["inputs"].values():
        assert len(digest) == 64


def test_reproducible_outputs(pipeline_dir, tmp_path):
    """Same argv + same inputs -> byte-identical outputs."""
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    for out in (a, b):
        assert run(["project", "--vectors", pipeline_dir / "store.jsonl",
                    "--n-neighbors", 10, "--min-dist", 0.1, "--seed", 7,
                    "--epochs", 50, "--out", out]) == 0
    assert a.read_bytes() == b.read_bytes()
