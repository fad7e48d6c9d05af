"""Command-line driver for the full pipeline.

Exit codes: 0 success, 1 contract/usage error, 2 IO error. Every
subcommand writes a provenance sidecar (resolved config + input hashes)
next to its main output; all outputs are written atomically.
"""

import json
import sys

import click
import numpy as np

from . import cluster as cluster_mod
from . import evaluate, synth
from .corpus import build_concept_index, parse_corpus, ConceptIndex
from .errors import ContractError
from .fileio import atomic_write_text
from .reduce import UmapParams, save_projection, sweep as sweep_op, umap_embed
from .session import file_sha256
from .vecstore import build_store, load_store, load_token_embeddings, pool_term, save_store


def _provenance(out_path, config, inputs):
    doc = {
        "config": config,
        "inputs": {str(p): file_sha256(p) for p in inputs},
    }
    atomic_write_text(str(out_path) + ".provenance.json", json.dumps(doc, indent=2, sort_keys=True))


def _int_list(_ctx, _param, value):
    return [int(x) for x in value.split(",")]


def _float_list(_ctx, _param, value):
    return [float(x) for x in value.split(",")]


@click.group()
def cli():
    """Concept-normalization workbench."""


@cli.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
def ingest(corpus_path, out_path):
    """Parse a tab-separated corpus and write the concept index JSON."""
    with open(corpus_path, encoding="utf-8") as fh:
        result = parse_corpus(fh)
    index = build_concept_index(result.records)
    index.save(out_path, rejects=result.rejects)
    _provenance(out_path, {"command": "ingest"}, [corpus_path])
    click.echo(
        f"ingested {len(result.records)} records, {len(index.concepts)} concepts, "
        f"{len(result.rejects)} rejects, {len(index.conflicts)} conflicts"
    )


@cli.command()
@click.option("--tokens", "tokens_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--raw-out", "raw_path", type=click.Path(), default=None,
              help="Also write the un-normalized pooled vectors.")
def pool(tokens_path, out_path, raw_path):
    """Pool token embeddings into normalized term vectors and save the store."""
    with open(tokens_path, encoding="utf-8") as fh:
        records, meta = load_token_embeddings(fh)
    store_meta = {"dim": meta["dim"], "model": meta.get("model", "")}
    if raw_path:
        save_store([pool_term(r) for r in records], raw_path, meta=store_meta)
    store = build_store(records, normalize=True)
    save_store(store, out_path, meta=store_meta)
    _provenance(out_path, {"command": "pool"}, [tokens_path])
    click.echo(f"pooled {len(store)} term vectors (dim {meta['dim']})")


def _load_matrix(store_path):
    store, _ = load_store(store_path)
    X = np.stack([tv.vector for tv in store])
    ids = [tv.term_id for tv in store]
    return store, X, ids


@cli.command()
@click.option("--vectors", "store_path", required=True, type=click.Path(exists=True))
@click.option("--n-neighbors", type=int, default=15, show_default=True)
@click.option("--min-dist", type=float, default=0.1, show_default=True)
@click.option("--epochs", type=int, default=500, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--metric", type=click.Choice(["cosine", "euclidean"]), default="cosine")
@click.option("--init", type=click.Choice(["spectral", "random"]), default="spectral")
@click.option("--out", "out_path", required=True, type=click.Path())
def project(store_path, n_neighbors, min_dist, epochs, seed, metric, init, out_path):
    """UMAP-project the vector store to 2-D and write the projection CSV."""
    store, X, ids = _load_matrix(store_path)
    params = UmapParams(
        n_neighbors=n_neighbors, min_dist=min_dist, n_epochs=epochs,
        seed=seed, metric=metric, init=init,
    )
    proj = umap_embed(X, params, ids=ids)
    save_projection(proj, out_path, vectors=store)
    _provenance(out_path, {"command": "project", "params": proj.params}, [store_path])
    click.echo(f"projected {len(ids)} terms -> {out_path}")


@cli.command("sweep")
@click.option("--vectors", "store_path", required=True, type=click.Path(exists=True))
@click.option("--n-neighbors", "nn_list", callback=_int_list, default="5,15,50", show_default=True)
@click.option("--min-dist", "md_list", callback=_float_list, default="0.01,0.1,0.5", show_default=True)
@click.option("--epochs", type=int, default=500, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--out-dir", "out_dir", required=True, type=click.Path())
def sweep_cmd(store_path, nn_list, md_list, epochs, seed, out_dir):
    """Project once per (n_neighbors, min_dist) pair from the default grids."""
    from pathlib import Path

    store, X, ids = _load_matrix(store_path)
    projections = sweep_op(X, nn_list, md_list, seed, ids=ids, n_epochs=epochs)
    out_dir = Path(out_dir)
    i = 0
    for nn in nn_list:
        for md in md_list:
            proj = projections[i]
            path = out_dir / f"proj_nn{nn}_md{md}.csv"
            save_projection(proj, path, vectors=store)
            _provenance(path, {"command": "sweep", "params": proj.params}, [store_path])
            i += 1
    click.echo(f"wrote {i} projections to {out_dir}")


@cli.command("cluster")
@click.option("--vectors", "store_path", required=True, type=click.Path(exists=True))
@click.option("--k", type=int, required=True)
@click.option("--seed", type=int, required=True)
@click.option("--restarts", type=int, default=10, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def cluster_cmd(store_path, k, seed, restarts, out_path):
    """Spherical k-means over the whole store; writes the cluster model JSON."""
    store, X, ids = _load_matrix(store_path)
    model = cluster_mod.kmeans_fit_restarts(
        X, cluster_mod.KMeansParams(k=k, seed=seed), restarts=restarts
    )
    clusters = []
    for c in range(k):
        idx = [i for i in range(len(store)) if model.assignments[i] == c]
        if not idx:
            continue
        clusters.append(
            {
                "cluster_id": c,
                "parent": cluster_mod.canonical_term(model, c, store),
                "members": [store[i].term for i in idx],
            }
        )
    doc = {
        "k": k,
        "objective": model.objective,
        "iterations_run": model.iterations_run,
        "converged": model.converged,
        "assignments": {tid: int(a) for tid, a in zip(ids, model.assignments)},
        "clusters": clusters,
    }
    atomic_write_text(out_path, json.dumps(doc, ensure_ascii=False, indent=2))
    _provenance(out_path, {"command": "cluster", "k": k, "seed": seed, "restarts": restarts},
                [store_path])
    click.echo(f"clustered {len(ids)} terms into {len(clusters)} clusters "
               f"(objective {model.objective:.6f})")


@cli.command("name")
@click.option("--vectors", "store_path", required=True, type=click.Path(exists=True))
@click.option("--index", "index_path", required=True, type=click.Path(exists=True))
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--dot", "dot_path", type=click.Path(), default=None)
def name_cmd(store_path, index_path, seed, out_path, dot_path):
    """Elect a parent node per concept group and export the star graph."""
    store, _, _ = _load_matrix(store_path)
    index = ConceptIndex.load(index_path)
    by_term = {tv.term: tv for tv in store}
    groups = []
    for label, terms in index.concepts.items():
        members = [by_term[t] for t in terms]
        X = np.stack([m.vector for m in members])
        model = cluster_mod.kmeans_fit_restarts(
            X, cluster_mod.KMeansParams(k=1, seed=seed), restarts=1
        )
        groups.append((label, model, members))
    tree = cluster_mod.build_parent_tree(groups)
    tree.save(out_path, dot_path)
    _provenance(out_path, {"command": "name", "seed": seed}, [store_path, index_path])
    click.echo(f"named {len(tree.clusters)} clusters")


@cli.command()
@click.option("--store", "store_path", required=True, type=click.Path(exists=True))
@click.option("--corpus", "index_path", required=True, type=click.Path(exists=True),
              help="Concept index JSON from `ingest`.")
@click.option("--out-dir", "out_dir", required=True, type=click.Path())
@click.option("--seed", type=int, default=0, show_default=True)
def report(store_path, index_path, out_dir, seed):
    """Write the separation report and the concept -> canonical-term table."""
    from pathlib import Path

    store, _, _ = _load_matrix(store_path)
    index = ConceptIndex.load(index_path)
    out_dir = Path(out_dir)

    sep = evaluate.separation_report(index, store)
    sep.save(out_dir / "separation.json")

    by_term = {tv.term: tv for tv in store}
    clustered = []
    for label, terms in index.concepts.items():
        members = [by_term[t] for t in terms]
        X = np.stack([m.vector for m in members])
        model = cluster_mod.kmeans_fit_restarts(
            X, cluster_mod.KMeansParams(k=1, seed=seed), restarts=1
        )
        clustered.append((label, model, members))
    rep = evaluate.concept_report(clustered)
    rep.save(out_dir / "concepts.json", out_dir / "concepts.txt")
    _provenance(out_dir / "separation.json", {"command": "report", "seed": seed},
                [store_path, index_path])
    click.echo(
        f"separation: n_within={sep.n_within} n_cross={sep.n_cross} mean_gap={sep.mean_gap}"
    )


@cli.command("synth")
@click.option("--seed", type=int, required=True)
@click.option("--concepts", "n_concepts", type=int, default=5, show_default=True)
@click.option("--terms", "terms_per_concept", type=int, default=8, show_default=True)
@click.option("--dim", type=int, default=32, show_default=True)
@click.option("--sigma", type=float, default=0.05, show_default=True)
@click.option("--out-corpus", "corpus_path", required=True, type=click.Path())
@click.option("--out-tokens", "tokens_path", required=True, type=click.Path())
@click.option("--out-planted", "planted_path", type=click.Path(), default=None)
def synth_cmd(seed, n_concepts, terms_per_concept, dim, sigma, corpus_path, tokens_path,
              planted_path):
    """Generate a synthetic corpus + token-embedding fixture with known answers."""
    planted = synth.write_fixture(
        seed, n_concepts, terms_per_concept, dim, sigma, corpus_path, tokens_path
    )
    if planted_path:
        atomic_write_text(planted_path, json.dumps(planted, indent=2, sort_keys=True))
    _provenance(tokens_path, {
        "command": "synth", "seed": seed, "concepts": n_concepts,
        "terms": terms_per_concept, "dim": dim, "sigma": sigma,
    }, [])
    click.echo(f"synthesized {n_concepts * terms_per_concept} records, {n_concepts} concepts")


@cli.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--store", "store_path", required=True, type=click.Path(exists=True))
@click.option("--projection", "projection_path", type=click.Path(exists=True), default=None)
@click.option("--index", "index_path", type=click.Path(exists=True), default=None)
@click.option("--session", "session_path", type=click.Path(), default=None)
def serve(port, store_path, projection_path, index_path, session_path):
    """Run the HTTP service for the studio UI."""
    import uvicorn

    from .service import create_app

    app = create_app(
        store_path=store_path,
        projection_path=projection_path,
        index_path=index_path,
        session_path=session_path,
    )
    uvicorn.run(app, host="127.0.0.1", port=port)


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        return 1
    except ContractError as exc:
        click.echo(f"error [{exc.code}]: {exc.message}", err=True)
        return 1
    except OSError as exc:
        click.echo(f"io error: {exc}", err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
