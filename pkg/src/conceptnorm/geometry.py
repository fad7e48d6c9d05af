"""Cosine similarity kernels, pairwise matrices, and distribution reports."""

import json
from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, EmptyInput, MissingVector, ZeroVector

HIST_BINS = 40  # fixed bins over [-1, 1] so reports compare across runs


@dataclass(frozen=True)
class SimilarityMatrix:
    ids: list
    values: np.ndarray  # (n, n) symmetric


@dataclass(frozen=True)
class Histogram:
    bin_edges: np.ndarray  # 41 edges over [-1, 1]
    counts: np.ndarray  # 40 ints
    n: int
    mean: float
    std: float

    def to_dict(self):
        return {
            "edges": [float(e) for e in self.bin_edges],
            "counts": [int(c) for c in self.counts],
            "n": self.n,
            "mean": self.mean,
            "std": self.std,
        }

    def to_json(self):
        return json.dumps(self.to_dict())


def cosine(v, w) -> float:
    """Cosine similarity, clamped to [-1, 1] to absorb rounding."""
    v = np.asarray(v, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if v.shape != w.shape:
        raise DimMismatch(f"dims differ: {v.shape} vs {w.shape}")
    nv = float(np.linalg.norm(v))
    nw = float(np.linalg.norm(w))
    if nv <= 1e-12 or nw <= 1e-12:
        raise ZeroVector("cosine undefined for (near-)zero vector")
    return float(np.clip(float(np.dot(v, w)) / (nv * nw), -1.0, 1.0))


def pairwise(vectors) -> SimilarityMatrix:
    """All-pairs cosine similarity; each off-diagonal computed once, mirrored."""
    if len(vectors) < 2:
        raise EmptyInput("pairwise needs at least 2 vectors")
    ids = [tv.term_id for tv in vectors]
    X = np.stack([tv.vector for tv in vectors]).astype(np.float64)
    n = X.shape[0]
    values = np.zeros((n, n))
    for i in range(n):
        values[i, i] = cosine(X[i], X[i])
        for j in range(i + 1, n):
            s = cosine(X[i], X[j])
            values[i, j] = s
            values[j, i] = s
    return SimilarityMatrix(ids=ids, values=values)


def histogram(values) -> Histogram:
    """40 uniform bins on [-1, 1]; half-open bins, last bin closed at 1."""
    values = np.asarray(list(values), dtype=np.float64)
    if values.size == 0:
        raise EmptyInput("histogram over empty value list")
    edges = np.linspace(-1.0, 1.0, HIST_BINS + 1)
    counts, _ = np.histogram(values, bins=edges)
    return Histogram(
        bin_edges=edges,
        counts=counts,
        n=int(values.size),
        mean=float(values.mean()),
        std=float(values.std()),
    )


def within_cross_values(index, store):
    """Split all pairwise similarities into same-concept and cross-concept lists.

    `store` is a list of TermVector covering every indexed term. Self-pairs
    are excluded. Raises MissingVector naming any term without a vector.
    """
    by_term = {tv.term: tv for tv in store}
    terms = []
    labels = []
    for label, ts in index.concepts.items():
        for t in ts:
            if t not in by_term:
                raise MissingVector(f"no vector for term {t!r}")
            terms.append(t)
            labels.append(label)

    within = []
    cross = []
    for i in range(len(terms)):
        vi = by_term[terms[i]].vector
        for j in range(i + 1, len(terms)):
            s = cosine(vi, by_term[terms[j]].vector)
            if labels[i] == labels[j]:
                within.append(s)
            else:
                cross.append(s)
    return within, cross
