import numpy as np
import pytest
from fastapi.testclient import TestClient

from conceptnorm.cluster import KMeansParams, kmeans_fit_restarts
from conceptnorm.service import create_app


@pytest.fixture()
def client(synth_assets, tmp_path):
    index, store, planted, _ = synth_assets
    coords = {tv.term_id: (float(i), float(-i)) for i, tv in enumerate(store)}
    app = create_app(
        store=store,
        index=index,
        coords=coords,
        session_path=str(tmp_path / "session.json"),
    )
    return TestClient(app)


def test_health(client):
    assert client.get("/api/health").json() == {"status": "ok"}


def test_points_fixture_count(client, synth_assets):
    _, store, _, _ = synth_assets
    points = client.get("/api/points").json()
    assert len(points) == 40
    for p in points:
        assert {"term_id", "term", "concept", "x", "y"} <= set(p)


def test_concepts_endpoint(client, synth_assets):
    index, _, _, _ = synth_assets
    doc = client.get("/api/concepts").json()
    assert doc["concepts"] == index.concepts


def test_groups_unknown_term_404(client):
    r = client.post("/api/groups", json={"group_id": "g1", "term_ids": ["nope"]})
    assert r.status_code == 404
    assert r.json()["code"] == "UnknownTerm"


def test_failed_mutation_leaves_version(client):
    v1 = client.post("/api/groups", json={"group_id": "g1", "term_ids": ["t0"]}).json()["version"]
    client.post("/api/groups", json={"group_id": "g2", "term_ids": ["t1", "nope"]})
    v2 = client.post("/api/groups", json={"group_id": "g1", "term_ids": ["t1"]}).json()["version"]
    assert v2 == v1 + 1


def test_group_label_flow(client):
    v = client.post(
        "/api/groups", json={"group_id": "g1", "term_ids": ["t0", "t1", "t2"]}
    ).json()["version"]
    v2 = client.post("/api/labels", json={"group_id": "g1", "label": "Headache"}).json()["version"]
    assert v2 == v + 1
    points = {p["term_id"]: p for p in client.get("/api/points").json()}
    assert points["t0"]["group_id"] == "g1"
    assert "group_id" not in points["t5"]


def test_label_unknown_group_404(client):
    r = client.post("/api/labels", json={"group_id": "nope", "label": "x"})
    assert r.status_code == 404
    assert r.json()["code"] == "UnknownGroup"


def test_cluster_run_matches_library(client, synth_assets):
    _, store, _, _ = synth_assets
    body = {"k": 5, "seed": 42, "restarts": 10}
    doc = client.post("/api/cluster/run", json=body).json()
    assert len(doc["clusters"]) == 5
    for c in doc["clusters"]:
        assert c["parent"] in c["members"]
    # direct library-call result on the same inputs and seed
    X = np.stack([tv.vector for tv in store])
    model = kmeans_fit_restarts(X, KMeansParams(k=5, seed=42), restarts=10)
    assert doc["objective"] == model.objective


def test_cluster_run_on_group(client, synth_assets):
    _, store, planted, _ = synth_assets
    term_ids = [tv.term_id for tv in store if tv.concept_label == "Concept 00"]
    client.post("/api/groups", json={"group_id": "g1", "term_ids": term_ids})
    doc = client.post(
        "/api/cluster/run", json={"group_id": "g1", "k": 1, "seed": 42, "restarts": 10}
    ).json()
    assert len(doc["clusters"]) == 1
    assert doc["clusters"][0]["parent"] == planted["Concept 00"]


def test_report_endpoints(client, synth_assets):
    _, store, _, _ = synth_assets
    sep = client.get("/api/report/separation").json()
    n = len(store)
    assert sep["n_within"] + sep["n_cross"] == n * (n - 1) // 2
    rows = client.get("/api/report/concepts").json()["rows"]
    assert len(rows) == 5
    for r in rows:
        assert r["canonical_term"]


def test_histogram_scopes(client):
    w = client.get("/api/histogram", params={"scope": "within"}).json()
    c = client.get("/api/histogram", params={"scope": "cross"}).json()
    assert sum(w["counts"]) == w["n"]
    assert w["mean"] > c["mean"]
    one = client.get("/api/histogram", params={"scope": "concept:Concept 00"}).json()
    assert one["n"] == 8 * 7 // 2
    bad = client.get("/api/histogram", params={"scope": "concept:Nope"})
    assert bad.status_code == 404


def test_responses_cacheable_determinism(client):
    a = client.get("/api/points").content
    b = client.get("/api/points").content
    assert a == b
    r1 = client.get("/api/report/separation").content
    r2 = client.get("/api/report/separation").content
    assert r1 == r2


def test_project_endpoint_updates_points(client):
    r = client.post("/api/project", json={"n_neighbors": 10, "min_dist": 0.1, "seed": 42})
    assert r.status_code == 200
    assert r.json()["projection_id"] == "proj-1"
    points = client.get("/api/points").json()
    assert all(p["x"] is not None for p in points)


def test_session_save(client, tmp_path):
    client.post("/api/groups", json={"group_id": "g1", "term_ids": ["t0"]})
    doc = client.post("/api/session/save").json()
    assert doc["version"] == 1
    assert (tmp_path / "session.json").exists()
