"""Synthetic fixture generator: a desk-scale stand-in corpus plus embeddings.

Concept directions are mutually orthogonal unit vectors (Gram-Schmidt on
seeded Gaussians); each synonym is direction + Gaussian noise, emitted as a
single-token embedding record. One synonym per concept sits exactly on the
direction, so the expected canonical term is known in advance.
"""

import json

import numpy as np

from .errors import DimTooSmall
from .fileio import atomic_write_text


def concept_directions(rng, n_concepts, dim):
    """n_concepts mutually orthogonal unit vectors in R^dim."""
    if dim < n_concepts:
        raise DimTooSmall(f"cannot orthogonalize {n_concepts} directions in dim {dim}")
    dirs = []
    while len(dirs) < n_concepts:
        v = rng.standard_normal(dim)
        for u in dirs:
            v = v - (v @ u) * u
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            dirs.append(v / norm)
    return np.stack(dirs)


def synth_fixture(seed, n_concepts, terms_per_concept, dim, noise_sigma):
    """Generate (corpus_tsv, tokens_jsonl, planted) as strings.

    `planted` maps concept label -> the term placed exactly on the concept
    direction (the expected parent node).
    """
    if n_concepts < 2:
        raise DimTooSmall("need at least 2 concepts")
    if dim < 4:
        raise DimTooSmall("dim must be at least 4")
    rng = np.random.default_rng(seed)
    dirs = concept_directions(rng, n_concepts, dim)

    tsv_lines = ["Example\tTerm\tGeneral SNOMED Label"]
    jsonl_lines = [json.dumps({"type": "meta", "dim": dim, "model": f"synth-seed{seed}"})]
    planted = {}
    tid = 0
    for c in range(n_concepts):
        label = f"Concept {c:02d}"
        for t in range(terms_per_concept):
            term = f"c{c:02d} term{t:02d}"
            if t == 0:
                vec = dirs[c].copy()
                planted[label] = term
            else:
                vec = dirs[c] + noise_sigma * rng.standard_normal(dim)
            tsv_lines.append(f"synthetic mention of {term}\t{term}\t{label}")
            jsonl_lines.append(
                json.dumps(
                    {
                        "term_id": f"t{tid}",
                        "term": term,
                        "concept": label,
                        "tokens": [term],
                        "vectors": [[float(x) for x in vec]],
                    }
                )
            )
            tid += 1
    return "\n".join(tsv_lines) + "\n", "\n".join(jsonl_lines) + "\n", planted


def write_fixture(seed, n_concepts, terms_per_concept, dim, noise_sigma, corpus_path, tokens_path):
    corpus_tsv, tokens_jsonl, planted = synth_fixture(
        seed, n_concepts, terms_per_concept, dim, noise_sigma
    )
    atomic_write_text(corpus_path, corpus_tsv)
    atomic_write_text(tokens_path, tokens_jsonl)
    return planted
