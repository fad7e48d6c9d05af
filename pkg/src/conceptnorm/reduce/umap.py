"""From-scratch UMAP: exact kNN, smooth-kNN calibration, fuzzy union, SGD layout.

Every stage is deterministic given the seed. The kNN graph is exact brute
force (desk-scale corpora, hundreds to low thousands of points), which also
removes the usual source of run-to-run jitter.
"""

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from numba import njit
from scipy.optimize import curve_fit

from ..errors import TooFewPoints
from ..fileio import atomic_write_text

SIGMA_LO = 1e-6
SIGMA_HI = 1e6
BISECT_ITERS = 64
CALIBRATION_TOL = 1e-3
GRAD_CLIP = 4.0


@dataclass(frozen=True)
class UmapParams:
    n_neighbors: int = 15
    min_dist: float = 0.1
    n_epochs: int = 500
    negative_sample_rate: int = 5
    initial_learning_rate: float = 1.0
    seed: int = 0
    metric: str = "cosine"
    init: str = "spectral"


@dataclass(frozen=True)
class KnnGraph:
    indices: np.ndarray  # (n, k) int64, no self-loops
    distances: np.ndarray  # (n, k) ascending per row


@dataclass(frozen=True)
class FuzzyGraph:
    strengths: np.ndarray  # (n, n) symmetric, zero diagonal, entries in [0, 1]


@dataclass(frozen=True)
class Projection2D:
    ids: list
    coords: np.ndarray  # (n, 2)
    params: dict
    produced_by: str  # "umap" | "pca"


def _row_distances(X, i, metric, norms=None):
    if metric == "euclidean":
        diff = X - X[i]
        return np.sqrt((diff * diff).sum(axis=1))
    if metric == "cosine":
        return 1.0 - (X @ X[i]) / (norms * norms[i])
    raise ValueError(f"unknown metric {metric!r}")


def knn_graph(X, k, metric="euclidean") -> KnnGraph:
    """Exact k nearest neighbors per point; ties broken by smaller index."""
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if k >= n:
        raise TooFewPoints(f"k={k} must be < n={n}")
    norms = np.linalg.norm(X, axis=1) if metric == "cosine" else None
    indices = np.empty((n, k), dtype=np.int64)
    distances = np.empty((n, k), dtype=np.float64)
    for i in range(n):
        d = _row_distances(X, i, metric, norms)
        d[i] = np.inf  # exclude self
        order = np.argsort(d, kind="stable")[:k]
        indices[i] = order
        distances[i] = d[order]
    return KnnGraph(indices=indices, distances=distances)


def smooth_knn_calibrate(row_distances, k):
    """Per-row bandwidth search: find sigma with neighbor weights summing to log2(k).

    Returns (rho, sigma, flagged). rho is the smallest nonzero distance
    (0 if all zero); sigma comes from 64 bisection steps on [1e-6, 1e6].
    Unattainable targets pin sigma to the bracket edge and set the flag.
    """
    d = np.asarray(row_distances, dtype=np.float64)
    nonzero = d[d > 0.0]
    rho = float(nonzero.min()) if nonzero.size else 0.0
    target = math.log2(k)

    def weight_sum(sigma):
        return float(np.exp(-np.maximum(0.0, d - rho) / sigma).sum())

    lo, hi = SIGMA_LO, SIGMA_HI
    if weight_sum(lo) >= target:
        return rho, lo, True
    if weight_sum(hi) <= target:
        return rho, hi, True
    for _ in range(BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        if weight_sum(mid) > target:
            hi = mid
        else:
            lo = mid
    sigma = 0.5 * (lo + hi)
    flagged = abs(weight_sum(sigma) - target) > CALIBRATION_TOL
    return rho, sigma, flagged


def fuzzy_union(directed) -> FuzzyGraph:
    """Symmetrize directed membership strengths: s = w + w' - w*w'."""
    W = np.asarray(directed, dtype=np.float64)
    S = W + W.T - W * W.T
    np.fill_diagonal(S, 0.0)
    return FuzzyGraph(strengths=S)


def _target_curve(x, min_dist):
    return np.where(x <= min_dist, 1.0, np.exp(-(x - min_dist)))


def fit_ab(min_dist):
    """Fit the low-dimensional similarity curve 1/(1 + a*x^(2b)).

    Least squares against the piecewise target (1 below min_dist, then
    exponential falloff) sampled at 300 points on [0, 3].
    """
    x = np.linspace(0.0, 3.0, 300)
    y = _target_curve(x, min_dist)

    def phi(x, a, b):
        return 1.0 / (1.0 + a * np.power(np.maximum(x, 1e-12), 2.0 * b))

    (a, b), _ = curve_fit(phi, x, y, p0=(1.0, 1.0), maxfev=10000)
    residual = float(((phi(x, a, b) - y) ** 2).sum())
    return float(a), float(b), residual


def _membership_strengths(knn, rhos, sigmas):
    n, k = knn.indices.shape
    W = np.zeros((n, n))
    for i in range(n):
        W[i, knn.indices[i]] = np.exp(-np.maximum(0.0, knn.distances[i] - rhos[i]) / sigmas[i])
    return W


def _spectral_init(strengths, rng):
    n = strengths.shape[0]
    deg = strengths.sum(axis=1)
    with np.errstate(divide="ignore"):
        dinv = np.where(deg > 0, 1.0 / np.sqrt(np.where(deg > 0, deg, 1.0)), 0.0)
    lap = np.eye(n) - (dinv[:, None] * strengths * dinv[None, :])
    try:
        _, vecs = np.linalg.eigh(lap)
    except np.linalg.LinAlgError:
        return rng.uniform(-10.0, 10.0, size=(n, 2))
    coords = vecs[:, 1:3].copy()
    scale = np.abs(coords).max()
    if scale <= 1e-12:
        return rng.uniform(-10.0, 10.0, size=(n, 2))
    return coords * (10.0 / scale)


@njit(cache=True)
def _sgd_layout(coords, heads, tails, periods, a, b, n_epochs, neg_rate, lr, rng_state):
    n = coords.shape[0]
    n_edges = heads.shape[0]
    state = rng_state
    for epoch in range(n_epochs):
        alpha = lr * (1.0 - epoch / n_epochs)
        for e in range(n_edges):
            if epoch % periods[e] != 0:
                continue
            i = heads[e]
            j = tails[e]
            dx = coords[i, 0] - coords[j, 0]
            dy = coords[i, 1] - coords[j, 1]
            d2 = dx * dx + dy * dy
            if d2 > 0.0:
                g = (-2.0 * a * b * d2 ** (b - 1.0)) / (1.0 + a * d2**b)
                gx = g * dx
                gy = g * dy
                if gx > GRAD_CLIP:
                    gx = GRAD_CLIP
                elif gx < -GRAD_CLIP:
                    gx = -GRAD_CLIP
                if gy > GRAD_CLIP:
                    gy = GRAD_CLIP
                elif gy < -GRAD_CLIP:
                    gy = -GRAD_CLIP
                coords[i, 0] += alpha * gx
                coords[i, 1] += alpha * gy
                coords[j, 0] -= alpha * gx
                coords[j, 1] -= alpha * gy
            for _ in range(neg_rate):
                state = state * np.uint64(6364136223846793005) + np.uint64(1442695040888963407)
                t = np.int64((state >> np.uint64(33)) % np.uint64(n))
                if t == i:
                    continue
                dx = coords[i, 0] - coords[t, 0]
                dy = coords[i, 1] - coords[t, 1]
                d2 = dx * dx + dy * dy
                g = (2.0 * b) / ((0.001 + d2) * (1.0 + a * d2**b))
                gx = g * dx
                gy = g * dy
                if gx > GRAD_CLIP:
                    gx = GRAD_CLIP
                elif gx < -GRAD_CLIP:
                    gx = -GRAD_CLIP
                if gy > GRAD_CLIP:
                    gy = GRAD_CLIP
                elif gy < -GRAD_CLIP:
                    gy = -GRAD_CLIP
                coords[i, 0] += alpha * gx
                coords[i, 1] += alpha * gy
    return coords


def fuzzy_graph(X, params: UmapParams) -> FuzzyGraph:
    """kNN + per-row calibration + fuzzy union, the graph half of the pipeline."""
    knn = knn_graph(X, params.n_neighbors, metric=params.metric)
    n = X.shape[0]
    rhos = np.empty(n)
    sigmas = np.empty(n)
    for i in range(n):
        rhos[i], sigmas[i], _ = smooth_knn_calibrate(knn.distances[i], params.n_neighbors)
    return fuzzy_union(_membership_strengths(knn, rhos, sigmas))


def umap_embed(X, params: UmapParams, ids=None) -> Projection2D:
    """Embed X into 2-D; a pure function of (X, params)."""
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if n <= params.n_neighbors:
        raise TooFewPoints(f"need more than n_neighbors={params.n_neighbors} points, got {n}")

    graph = fuzzy_graph(X, params)
    S = graph.strengths

    rng = np.random.default_rng(params.seed)
    if params.init == "spectral":
        coords = _spectral_init(S, rng)
    else:
        coords = rng.uniform(-10.0, 10.0, size=(n, 2))
    coords = np.ascontiguousarray(coords, dtype=np.float64)

    a, b, _ = fit_ab(params.min_dist)

    heads, tails = np.nonzero(np.triu(S, k=1))
    strengths = S[heads, tails]
    if strengths.size:
        max_s = strengths.max()
        # a period beyond n_epochs means "epoch 0 only"; cap before the int cast
        ratio = np.minimum(max_s / strengths, max(params.n_epochs, 1))
        periods = np.maximum(1, np.rint(ratio)).astype(np.int64)
    else:
        periods = np.zeros(0, dtype=np.int64)

    rng_state = np.uint64((params.seed * 2654435761 + 0x9E3779B9) & 0xFFFFFFFFFFFFFFFF | 1)
    _sgd_layout(
        coords,
        heads.astype(np.int64),
        tails.astype(np.int64),
        periods,
        float(a),
        float(b),
        int(params.n_epochs),
        int(params.negative_sample_rate),
        float(params.initial_learning_rate),
        rng_state,
    )

    return Projection2D(
        ids=list(ids) if ids is not None else list(range(n)),
        coords=coords,
        params=asdict(params),
        produced_by="umap",
    )


def _pair_seed(base_seed, n_neighbors, min_dist):
    # stable 63-bit mix; python hash() is randomized for strings, avoid it
    mix = (n_neighbors * 0x9E3779B97F4A7C15 + int(round(min_dist * 1e9)) * 0xC2B2AE3D27D4EB4F) & 0x7FFFFFFFFFFFFFFF
    return base_seed ^ mix


def sweep(X, n_neighbors_list, min_dist_list, seed, ids=None, **overrides):
    """One projection per (n_neighbors, min_dist) pair, each independently seeded."""
    out = []
    for nn in n_neighbors_list:
        for md in min_dist_list:
            params = UmapParams(
                n_neighbors=nn, min_dist=md, seed=_pair_seed(seed, nn, md), **overrides
            )
            out.append(umap_embed(X, params, ids=ids))
    return out


def projection_csv(proj: Projection2D, vectors=None) -> str:
    """Render a projection as CSV: term_id,term,concept,x,y."""
    by_id = {tv.term_id: tv for tv in vectors} if vectors else {}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["term_id", "term", "concept", "x", "y"])
    for pid, (x, y) in zip(proj.ids, proj.coords):
        tv = by_id.get(pid)
        w.writerow(
            [
                pid,
                tv.term if tv else "",
                (tv.concept_label or "") if tv else "",
                repr(float(x)),
                repr(float(y)),
            ]
        )
    return buf.getvalue()


def save_projection(proj: Projection2D, path, vectors=None) -> None:
    """Write projection CSV plus a params/seed sidecar for provenance."""
    atomic_write_text(path, projection_csv(proj, vectors))
    sidecar = {"produced_by": proj.produced_by, "params": proj.params}
    atomic_write_text(str(path) + ".meta.json", json.dumps(sidecar, indent=2, sort_keys=True))
