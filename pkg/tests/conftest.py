import numpy as np
import pytest

from conceptnorm.corpus import build_concept_index, parse_corpus
from conceptnorm.synth import synth_fixture
from conceptnorm.vecstore import build_store, load_token_embeddings


@pytest.fixture(scope="session")
def synth_assets():
    """The standard 5x8 synthetic fixture: (index, store, planted, gold labels)."""
    tsv, jsonl, planted = synth_fixture(seed=7, n_concepts=5, terms_per_concept=8,
                                        dim=32, noise_sigma=0.05)
    index = build_concept_index(parse_corpus(tsv).records)
    records, _ = load_token_embeddings(jsonl)
    store = build_store(records, normalize=True)
    gold = [tv.concept_label for tv in store]
    return index, store, planted, gold


def brute_force_kmeans_objective(X, k):
    """Minimum spherical k-means objective over every assignment of n points
    into at most k clusters: objective = n - sum_c ||sum of members of c||.
    Enumerates all k^n label vectors, vectorized over assignments."""
    n, _ = X.shape
    total = k**n
    labels = np.empty((total, n), dtype=np.int8)
    v = np.arange(total)
    for i in range(n):
        labels[:, i] = v % k
        v //= k
    obj = np.full(total, float(n))
    for c in range(k):
        sums = (labels == c).astype(np.float64) @ X
        obj -= np.linalg.norm(sums, axis=1)
    return float(obj.min())


def unit_rows(rng, n, d):
    X = rng.standard_normal((n, d))
    return X / np.linalg.norm(X, axis=1, keepdims=True)
