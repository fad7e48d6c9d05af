"""Spherical k-means over unit vectors, canonical-term election, star export.

Cosine similarity drives assignment; centroids are normalized means. Every
tie breaks toward the lowest index (or lexicographically for terms) so a
model is a deterministic function of (points, params).
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyCluster, KTooLarge, NotNormalized
from .fileio import atomic_write_text

NORM_TOL = 1e-9


@dataclass(frozen=True)
class KMeansParams:
    k: int
    seed: int = 0
    max_iters: int = 100
    tol: float = 1e-6
    init: str = "kmeans_pp"


@dataclass(frozen=True)
class ClusterModel:
    centroids: np.ndarray  # (k, d), unit rows
    assignments: np.ndarray  # (n,) int
    objective: float  # sum over points of 1 - cos(point, centroid)
    iterations_run: int
    converged: bool


@dataclass
class ParentTree:
    clusters: list = field(default_factory=list)  # [{"label", "parent", "members"}]

    def to_json(self) -> str:
        return json.dumps({"clusters": self.clusters}, ensure_ascii=False, indent=2)

    def to_dot(self) -> str:
        lines = ["graph parent_tree {"]
        for c in self.clusters:
            parent = c["parent"]
            lines.append(f'  "{parent}" [shape=box, label="{c["label"]}\\n{parent}"];')
            for m in c["members"]:
                if m != parent:
                    lines.append(f'  "{parent}" -- "{m}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def save(self, json_path, dot_path=None) -> None:
        atomic_write_text(json_path, self.to_json())
        if dot_path:
            atomic_write_text(dot_path, self.to_dot())


def _check_points(X, k):
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if k > n:
        raise KTooLarge(f"k={k} exceeds n={n}")
    norms = np.linalg.norm(X, axis=1)
    if np.any(np.abs(norms - 1.0) > NORM_TOL):
        raise NotNormalized("points must be L2-normalized")
    return X


def _kmeanspp_seeds(X, k, rng):
    """k-means++ adapted to cosine: D(x) = 1 - max cos to chosen seeds, weight D^2."""
    n = X.shape[0]
    chosen = [int(rng.integers(n))]
    best_cos = X @ X[chosen[0]]
    while len(chosen) < k:
        d = 1.0 - best_cos
        w = d * d
        total = w.sum()
        if total <= 0.0:
            # all points coincide with some seed; fall back to uniform over the rest
            remaining = np.setdiff1d(np.arange(n), np.array(chosen))
            nxt = int(remaining[rng.integers(remaining.size)])
        else:
            nxt = int(rng.choice(n, p=w / total))
        chosen.append(nxt)
        best_cos = np.maximum(best_cos, X @ X[nxt])
    return X[chosen].copy()


def _assign(X, centroids):
    sims = X @ centroids.T
    # argmax with ties toward the lowest cluster index (np.argmax is first-max)
    return sims.argmax(axis=1), sims


def _objective(sims, assignments):
    return float((1.0 - sims[np.arange(len(assignments)), assignments]).sum())


def kmeans_fit(X, params: KMeansParams, _trace=None) -> ClusterModel:
    """One seeded Lloyd run on unit vectors.

    Empty clusters are reseeded with the current worst-fit point. When
    `_trace` is a list, the post-update objective of every iteration is
    appended (used by the monotonicity tests).
    """
    X = _check_points(X, params.k)
    n, d = X.shape
    rng = np.random.default_rng(params.seed)
    centroids = _kmeanspp_seeds(X, params.k, rng)
    centroids = centroids / np.linalg.norm(centroids, axis=1, keepdims=True)

    assignments, sims = _assign(X, centroids)
    prev_objective = _objective(sims, assignments)
    converged = False
    iteration = 0
    for iteration in range(1, params.max_iters + 1):
        # update step: centroid = normalized mean of members
        new_centroids = centroids.copy()
        for c in range(params.k):
            members = X[assignments == c]
            if members.shape[0] == 0:
                continue
            mean = members.mean(axis=0)
            norm = np.linalg.norm(mean)
            if norm > 1e-12:
                new_centroids[c] = mean / norm
        # repair empty clusters with the worst-fit point
        counts = np.bincount(assignments, minlength=params.k)
        for c in np.nonzero(counts == 0)[0]:
            fit = (X * new_centroids[assignments]).sum(axis=1)
            worst = int(np.argmin(fit))
            new_centroids[c] = X[worst]
            assignments[worst] = c
        centroids = new_centroids

        new_assignments, sims = _assign(X, centroids)
        objective = _objective(sims, new_assignments)
        if _trace is not None:
            _trace.append(objective)
        unchanged = bool(np.array_equal(new_assignments, assignments))
        assignments = new_assignments
        if unchanged or (prev_objective - objective) < params.tol:
            prev_objective = objective
            converged = True
            break
        prev_objective = objective

    return ClusterModel(
        centroids=centroids,
        assignments=assignments,
        objective=prev_objective,
        iterations_run=iteration,
        converged=converged,
    )


def _refine_assignments(X, assignments, k):
    """Deterministic single-point-move hill climb on the exact objective.

    Objective = n - sum_c ||sum of members of c||, so a move improves iff it
    raises the total of cluster-sum norms. Moves that would empty a cluster
    are skipped. Escapes the Lloyd-stable local minima that plain restarts
    leave behind on small instances.
    """
    A = assignments.copy()
    n, d = X.shape
    sums = np.zeros((k, d))
    for c in range(k):
        sums[c] = X[A == c].sum(axis=0)
    counts = np.bincount(A, minlength=k)
    norms = np.linalg.norm(sums, axis=1)
    improved = True
    while improved:
        improved = False
        for i in range(n):
            a = A[i]
            if counts[a] == 1:
                continue
            x = X[i]
            norm_a_without = np.linalg.norm(sums[a] - x)
            for c in range(k):
                if c == a:
                    continue
                gain = (norm_a_without + np.linalg.norm(sums[c] + x)) - (norms[a] + norms[c])
                if gain > 1e-12:
                    sums[a] -= x
                    sums[c] += x
                    counts[a] -= 1
                    counts[c] += 1
                    norms[a] = norm_a_without
                    norms[c] = np.linalg.norm(sums[c])
                    A[i] = c
                    improved = True
                    break
    return A


def _polish(X, model: ClusterModel, k) -> ClusterModel:
    """Alternate single-move refinement and Lloyd steps to a joint fixed point.

    The returned model is argmax-assigned to its own centroids, with the
    objective recomputed from that final state.
    """
    assignments = model.assignments
    centroids = model.centroids
    prev_objective = np.inf
    for _ in range(100):
        refined = _refine_assignments(X, assignments, k)
        centroids = centroids.copy()
        for c in range(k):
            members = X[refined == c]
            if members.shape[0]:
                mean = members.mean(axis=0)
                norm = np.linalg.norm(mean)
                if norm > 1e-12:
                    centroids[c] = mean / norm
        new_assignments, sims = _assign(X, centroids)
        objective = _objective(sims, new_assignments)
        stable = bool(np.array_equal(new_assignments, refined))
        assignments = new_assignments
        if stable or objective >= prev_objective:
            prev_objective = objective
            break
        prev_objective = objective
    return ClusterModel(
        centroids=centroids,
        assignments=assignments,
        objective=prev_objective,
        iterations_run=model.iterations_run,
        converged=model.converged,
    )


def kmeans_fit_restarts(X, params: KMeansParams, restarts: int = 10) -> ClusterModel:
    """Best of `restarts` seeded runs, each polished by single-move refinement;
    objective ties break toward the lowest restart."""
    Xv = _check_points(X, params.k)
    best = None
    for r in range(restarts):
        model = kmeans_fit(Xv, KMeansParams(
            k=params.k,
            seed=params.seed + r,
            max_iters=params.max_iters,
            tol=params.tol,
            init=params.init,
        ))
        model = _polish(Xv, model, params.k)
        if best is None or model.objective < best.objective:
            best = model
    return best


def canonical_term(model: ClusterModel, cluster_id: int, members) -> str:
    """Elect the cluster member with maximum cosine to the centroid.

    `members` is the full list of TermVector aligned with model.assignments.
    Ties break lexicographically by term.
    """
    idx = [i for i in range(len(members)) if model.assignments[i] == cluster_id]
    if not idx:
        raise EmptyCluster(f"cluster {cluster_id} has no members")
    centroid = model.centroids[cluster_id]
    best = None
    best_cos = -np.inf
    for i in idx:
        c = float(members[i].vector @ centroid)
        if c > best_cos or (c == best_cos and members[i].term < best):
            best = members[i].term
            best_cos = c
    return best


def build_parent_tree(groups) -> ParentTree:
    """Assemble one star per cluster across annotated groups.

    `groups` is a list of (label, model, members) where members align with
    the model's assignments. A missing label falls back to the parent term.
    """
    tree = ParentTree()
    for label, model, members in groups:
        k = model.centroids.shape[0]
        for c in range(k):
            member_terms = [members[i].term for i in range(len(members)) if model.assignments[i] == c]
            if not member_terms:
                continue
            parent = canonical_term(model, c, members)
            tree.clusters.append(
                {
                    "label": label if label else parent,
                    "parent": parent,
                    "members": member_terms,
                }
            )
    return tree
