"""HTTP gateway for the studio UI.

Read-mostly endpoints plus session mutations; clustering and projections
are recomputed on demand with explicit seeds from the request, so every
number the UI shows is reproducible.
"""

import csv
import threading

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import cluster as cluster_mod
from . import evaluate, geometry
from .corpus import ConceptIndex
from .errors import ContractError, EmptyInput, UnknownGroup, UnknownTerm
from .reduce import UmapParams, umap_embed
from .session import AnnotationSession
from .vecstore import load_store

NOT_FOUND_CODES = {"UnknownTerm", "UnknownGroup", "MissingVector", "EmptyCluster"}


class GroupBody(BaseModel):
    group_id: str
    term_ids: list[str]


class LabelBody(BaseModel):
    group_id: str
    label: str


class ProjectBody(BaseModel):
    n_neighbors: int = 15
    min_dist: float = 0.1
    seed: int = 0


class ClusterBody(BaseModel):
    group_id: str | None = None
    k: int = 1
    seed: int = 0
    restarts: int = 10


def _load_projection_csv(path):
    with open(path, encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return {r["term_id"]: (float(r["x"]), float(r["y"])) for r in rows}


def create_app(
    store_path=None,
    projection_path=None,
    index_path=None,
    session_path=None,
    store=None,
    index=None,
    coords=None,
    session=None,
):
    """Build the FastAPI app. Paths are loaded once at startup; in-memory
    objects may be passed directly (used by tests)."""
    if store is None:
        if store_path is None:
            raise ValueError("store or store_path required")
        store, _ = load_store(store_path)
    by_id = {tv.term_id: tv for tv in store}

    if index is None and index_path is not None:
        index = ConceptIndex.load(index_path)

    if coords is None and projection_path is not None:
        coords = _load_projection_csv(projection_path)
    coords = dict(coords or {})

    if session is None:
        import os

        if session_path is not None and os.path.exists(session_path):
            session = AnnotationSession.load(session_path)
        else:
            session = AnnotationSession("session-0", known_terms=by_id.keys())

    state = {
        "store": store,
        "by_id": by_id,
        "index": index,
        "coords": coords,
        "session": session,
        "session_path": session_path,
        "cluster_ids": {},  # term_id -> cluster id from the last run
        "projection_count": 0,
    }
    lock = threading.Lock()  # single-writer queue for session mutations

    app = FastAPI(title="conceptnorm service")
    app.state.workbench = state

    @app.exception_handler(ContractError)
    async def contract_error_handler(request: Request, exc: ContractError):
        status = 404 if exc.code in NOT_FOUND_CODES else 400
        return JSONResponse(
            status_code=status,
            content={"code": exc.code, "message": exc.message, "detail": exc.detail},
        )

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.get("/api/points")
    def points():
        out = []
        sess = state["session"]
        for tv in state["store"]:
            xy = state["coords"].get(tv.term_id)
            rec = {
                "term_id": tv.term_id,
                "term": tv.term,
                "concept": tv.concept_label,
                "x": xy[0] if xy else None,
                "y": xy[1] if xy else None,
            }
            gid = sess.group_of(tv.term_id)
            if gid is not None:
                rec["group_id"] = gid
            cid = state["cluster_ids"].get(tv.term_id)
            if cid is not None:
                rec["cluster_id"] = cid
            out.append(rec)
        return out

    @app.get("/api/concepts")
    def concepts():
        idx = state["index"]
        if idx is None:
            return {"concepts": {}, "conflicts": []}
        return {"concepts": idx.concepts, "conflicts": idx.conflicts}

    @app.post("/api/groups")
    def post_groups(body: GroupBody):
        with lock:
            version = state["session"].assign_terms(body.group_id, body.term_ids)
        return {"version": version}

    @app.post("/api/labels")
    def post_labels(body: LabelBody):
        with lock:
            version = state["session"].set_label(body.group_id, body.label)
        return {"version": version}

    @app.post("/api/project")
    def post_project(body: ProjectBody):
        X = np.stack([tv.vector for tv in state["store"]])
        ids = [tv.term_id for tv in state["store"]]
        params = UmapParams(n_neighbors=body.n_neighbors, min_dist=body.min_dist, seed=body.seed)
        proj = umap_embed(X, params, ids=ids)
        with lock:
            state["coords"] = {
                tid: (float(x), float(y)) for tid, (x, y) in zip(proj.ids, proj.coords)
            }
            state["projection_count"] += 1
            pid = f"proj-{state['projection_count']}"
        return {"projection_id": pid}

    def _scope_vectors(group_id):
        sess = state["session"]
        if group_id is None:
            return list(state["store"])
        if group_id not in sess.groups:
            raise UnknownGroup(f"unknown group {group_id!r}")
        return [state["by_id"][tid] for tid in sess.groups[group_id]]

    @app.post("/api/cluster/run")
    def cluster_run(body: ClusterBody):
        members = _scope_vectors(body.group_id)
        X = np.stack([tv.vector for tv in members])
        params = cluster_mod.KMeansParams(k=body.k, seed=body.seed)
        model = cluster_mod.kmeans_fit_restarts(X, params, restarts=body.restarts)
        clusters = []
        for c in range(body.k):
            idx = [i for i in range(len(members)) if model.assignments[i] == c]
            if not idx:
                continue
            clusters.append(
                {
                    "cluster_id": c,
                    "parent": cluster_mod.canonical_term(model, c, members),
                    "members": [members[i].term for i in idx],
                    "size": len(idx),
                }
            )
        with lock:
            state["cluster_ids"].update(
                {tv.term_id: int(model.assignments[i]) for i, tv in enumerate(members)}
            )
        return {
            "objective": model.objective,
            "iterations_run": model.iterations_run,
            "converged": model.converged,
            "clusters": clusters,
        }

    def _gold_index_or_404():
        idx = state["index"]
        if idx is None:
            raise UnknownGroup("no gold concept index loaded")
        return idx

    @app.get("/api/report/separation")
    def report_separation():
        idx = _gold_index_or_404()
        return evaluate.separation_report(idx, state["store"]).to_dict()

    @app.get("/api/report/concepts")
    def report_concepts():
        idx = _gold_index_or_404()
        by_term = {tv.term: tv for tv in state["store"]}
        clustered = []
        for label, terms in idx.concepts.items():
            members = [by_term[t] for t in terms]
            X = np.stack([m.vector for m in members])
            model = cluster_mod.kmeans_fit_restarts(
                X, cluster_mod.KMeansParams(k=1, seed=0), restarts=1
            )
            clustered.append((label, model, members))
        return {"rows": evaluate.concept_report(clustered).rows}

    @app.get("/api/histogram")
    def histogram_endpoint(scope: str = "within"):
        idx = _gold_index_or_404()
        within, cross = geometry.within_cross_values(idx, state["store"])
        if scope == "within":
            values = within
        elif scope == "cross":
            values = cross
        elif scope.startswith("concept:"):
            label = scope.split(":", 1)[1]
            if label not in idx.concepts:
                raise UnknownGroup(f"unknown concept {label!r}")
            members = [tv for tv in state["store"] if tv.term in set(idx.concepts[label])]
            values = []
            for i in range(len(members)):
                for j in range(i + 1, len(members)):
                    values.append(geometry.cosine(members[i].vector, members[j].vector))
        else:
            raise EmptyInput(f"unknown scope {scope!r}")
        if not values:
            return {"edges": [], "counts": [], "n": 0, "mean": None, "std": None}
        return geometry.histogram(values).to_dict()

    @app.post("/api/session/save")
    def session_save():
        path = state["session_path"] or "session.json"
        with lock:
            state["session"].save(path)
            version = state["session"].version
        return {"path": str(path), "version": version}

    return app
