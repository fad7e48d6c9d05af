"""Record real service responses into tests/fixtures/recorded.json.

The vitest suite replays these through a mocked fetch, so every number the
UI tests assert on came from the actual HTTP service, not hand-written JSON.
Re-run after changing the service: python3 frontend/scripts/record_fixtures.py
"""

import json
import os

import numpy as np
from fastapi.testclient import TestClient

from conceptnorm.corpus import build_concept_index, parse_corpus
from conceptnorm.reduce import UmapParams, umap_embed
from conceptnorm.service import create_app
from conceptnorm.synth import synth_fixture
from conceptnorm.vecstore import build_store, load_token_embeddings

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "tests", "fixtures", "recorded.json")


def lasso_polygon(points, term_ids):
    """Bounding box of the chosen points, padded, as a closed polygon.

    Fails if any other point falls inside: the recorded polygon must select
    exactly the chosen set.
    """
    chosen = [p for p in points if p["term_id"] in term_ids]
    others = [p for p in points if p["term_id"] not in term_ids]
    xs = [p["x"] for p in chosen]
    ys = [p["y"] for p in chosen]
    pad_x = 0.02 * (max(xs) - min(xs) + 1.0)
    pad_y = 0.02 * (max(ys) - min(ys) + 1.0)
    x0, x1 = min(xs) - pad_x, max(xs) + pad_x
    y0, y1 = min(ys) - pad_y, max(ys) + pad_y
    for p in others:
        if x0 <= p["x"] <= x1 and y0 <= p["y"] <= y1:
            raise SystemExit(f"polygon would also catch {p['term']}")
    return [[x0, y0], [x1, y0], [x1, y1], [x0, y1]]


def main():
    corpus_tsv, tokens_jsonl, planted = synth_fixture(
        seed=7, n_concepts=5, terms_per_concept=8, dim=32, noise_sigma=0.05
    )
    parsed = parse_corpus(corpus_tsv)
    index = build_concept_index(parsed.records)
    records, _ = load_token_embeddings(tokens_jsonl)
    store = build_store(records)

    X = np.stack([tv.vector for tv in store])
    proj = umap_embed(
        X,
        UmapParams(n_neighbors=10, min_dist=0.1, seed=42),
        ids=[tv.term_id for tv in store],
    )
    coords = {tid: (float(x), float(y)) for tid, (x, y) in zip(proj.ids, proj.coords)}

    client = TestClient(create_app(store=store, index=index, coords=coords))

    points = client.get("/api/points").json()
    target = "Concept 02"
    lasso_ids = [p["term_id"] for p in points if p["concept"] == target]
    assert len(lasso_ids) == 8
    polygon = lasso_polygon(points, set(lasso_ids))

    recorded = {
        "lasso": {"polygon": polygon, "expected_term_ids": lasso_ids, "concept": target},
        "planted_parent": planted[target],
        "calls": [],
    }

    def record(method, path, body=None):
        if method == "GET":
            resp = client.get(path)
        else:
            resp = client.post(path, json=body)
        recorded["calls"].append(
            {
                "method": method,
                "path": path,
                "body": body,
                "status": resp.status_code,
                "response": resp.json(),
            }
        )
        return resp.json()

    recorded["calls"].append(
        {"method": "GET", "path": "/api/points", "body": None, "status": 200, "response": points}
    )
    record("GET", "/api/concepts")
    record("POST", "/api/groups", {"group_id": "g1", "term_ids": lasso_ids})
    record("POST", "/api/labels", {"group_id": "g1", "label": "Headache"})
    record("GET", "/api/points")  # after mutations: group_id present
    record("POST", "/api/cluster/run", {"group_id": "g1", "k": 1, "seed": 42})
    record("GET", "/api/histogram?scope=within")
    record("GET", "/api/histogram?scope=cross")

    os.makedirs(os.path.dirname(OUT), exist_ok=True)
    with open(OUT, "w", encoding="utf-8") as fh:
        json.dump(recorded, fh, indent=2)
    print(f"wrote {os.path.normpath(OUT)} ({len(recorded['calls'])} calls)")


if __name__ == "__main__":
    main()
