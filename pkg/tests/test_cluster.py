import numpy as np
import pytest

from conceptnorm.cluster import (
    ClusterModel,
    KMeansParams,
    ParentTree,
    build_parent_tree,
    canonical_term,
    kmeans_fit,
    kmeans_fit_restarts,
)
from conceptnorm.errors import EmptyCluster, KTooLarge, NotNormalized
from conceptnorm.vecstore import TermVector
from conftest import brute_force_kmeans_objective, unit_rows


def tv(i, vec, term=None, concept=None):
    v = np.asarray(vec, dtype=float)
    return TermVector(f"t{i}", term or f"term{i:02d}", concept,
                      v / np.linalg.norm(v), normalized=True)


def test_k_equals_n():
    X = unit_rows(np.random.default_rng(41), 6, 4)
    model = kmeans_fit(X, KMeansParams(k=6, seed=0))
    assert abs(model.objective) < 1e-12
    assert len(set(model.assignments.tolist())) == 6


def test_antipodal_pairs_recover_optimal_partition():
    theta = np.array([0.0, np.pi, np.pi / 2, 3 * np.pi / 2])
    X = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    model = kmeans_fit_restarts(X, KMeansParams(k=2, seed=3), restarts=10)
    best = brute_force_kmeans_objective(X, 2)
    assert abs(model.objective - best) < 1e-9


def test_three_blobs_purity_one():
    rng = np.random.default_rng(42)
    dirs = np.eye(6)[:3]
    X = np.vstack([d + 0.05 * rng.standard_normal((10, 6)) for d in dirs])
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    model = kmeans_fit_restarts(X, KMeansParams(k=3, seed=1), restarts=10)
    labels = np.repeat([0, 1, 2], 10)
    # brute-force check: every blob lands in one cluster
    for b in range(3):
        assert len(set(model.assignments[labels == b].tolist())) == 1
    assert len(set(model.assignments.tolist())) == 3


def test_lloyd_monotonicity():
    rng = np.random.default_rng(43)
    for seed in range(5):
        X = unit_rows(rng, 40, 8)
        trace = []
        kmeans_fit(X, KMeansParams(k=4, seed=seed), _trace=trace)
        for before, after in zip(trace, trace[1:]):
            assert after <= before + 1e-12


def test_determinism_bitwise():
    X = unit_rows(np.random.default_rng(44), 25, 5)
    m1 = kmeans_fit(X, KMeansParams(k=4, seed=9))
    m2 = kmeans_fit(X, KMeansParams(k=4, seed=9))
    assert np.array_equal(m1.centroids, m2.centroids)
    assert np.array_equal(m1.assignments, m2.assignments)
    assert m1.objective == m2.objective


def test_restarts_match_brute_force_optimum():
    rng = np.random.default_rng(45)
    for n, k in [(8, 2), (10, 3), (12, 3)]:
        X = unit_rows(rng, n, 4)
        model = kmeans_fit_restarts(X, KMeansParams(k=k, seed=7), restarts=10)
        best = brute_force_kmeans_objective(X, k)
        assert model.objective >= best - 1e-9  # can never beat the optimum
        assert abs(model.objective - best) < 1e-9


def test_scale_invariance_of_decisions():
    rng = np.random.default_rng(46)
    raw = rng.standard_normal((20, 6))
    for alpha in (0.001, 1.0, 250.0):
        X = alpha * raw
        X = X / np.linalg.norm(X, axis=1, keepdims=True)
        model = kmeans_fit(X, KMeansParams(k=3, seed=2))
        base = kmeans_fit(raw / np.linalg.norm(raw, axis=1, keepdims=True),
                          KMeansParams(k=3, seed=2))
        assert np.array_equal(model.assignments, base.assignments)


def test_centroids_unit_norm():
    X = unit_rows(np.random.default_rng(47), 30, 7)
    model = kmeans_fit(X, KMeansParams(k=5, seed=0))
    assert np.all(np.abs(np.linalg.norm(model.centroids, axis=1) - 1.0) < 1e-9)


def test_k_too_large():
    with pytest.raises(KTooLarge):
        kmeans_fit(unit_rows(np.random.default_rng(0), 3, 4), KMeansParams(k=4))


def test_not_normalized():
    with pytest.raises(NotNormalized):
        kmeans_fit(np.ones((4, 3)), KMeansParams(k=2))


def members_and_model(vectors, k=1, seed=0):
    X = np.stack([m.vector for m in vectors])
    return vectors, kmeans_fit_restarts(X, KMeansParams(k=k, seed=seed), restarts=5)


def test_canonical_singleton():
    members, model = members_and_model([tv(0, [1, 0, 0], "only one")])
    assert canonical_term(model, 0, members) == "only one"


def test_canonical_member_on_centroid_wins():
    base = np.array([1.0, 0.0, 0.0])
    members = [
        tv(0, base + [0.0, 0.3, 0.1], "off a"),
        tv(1, base + [0.0, -0.3, -0.1], "off b"),
        tv(2, base, "dead center"),
    ]
    # centroid of the symmetric pair + center is the base direction
    members, model = members_and_model(members)
    assert canonical_term(model, 0, members) == "dead center"


def test_canonical_always_a_member():
    rng = np.random.default_rng(48)
    members = [tv(i, rng.standard_normal(5)) for i in range(12)]
    members, model = members_and_model(members, k=3, seed=1)
    for c in set(model.assignments.tolist()):
        term = canonical_term(model, c, members)
        cluster_terms = [members[i].term for i in range(12) if model.assignments[i] == c]
        assert term in cluster_terms


def test_canonical_empty_cluster():
    members, model = members_and_model([tv(0, [1, 0], "x"), tv(1, [1, 0.01], "y")])
    with pytest.raises(EmptyCluster):
        canonical_term(model, 5, members)


def test_parent_tree_single_star():
    members = [tv(0, [1, 0.01, 0], "gas pains"),
               tv(1, [1, -0.01, 0], "painful gas"),
               tv(2, [1, 0, 0.01], "gas pain")]
    members, model = members_and_model(members)
    tree = build_parent_tree([("Abdominal Wind Pain", model, members)])
    assert len(tree.clusters) == 1
    star = tree.clusters[0]
    assert star["label"] == "Abdominal Wind Pain"
    assert star["parent"] in {"gas pains", "painful gas", "gas pain"}
    assert sorted(star["members"]) == ["gas pain", "gas pains", "painful gas"]


def test_parent_tree_empty_session():
    assert build_parent_tree([]).clusters == []


def test_parent_tree_unlabeled_falls_back_to_parent():
    members, model = members_and_model([tv(0, [0, 1], "solo")])
    tree = build_parent_tree([(None, model, members)])
    assert tree.clusters[0]["label"] == "solo"


def test_parent_tree_exports(tmp_path):
    members, model = members_and_model([tv(0, [1, 0.01], "a"), tv(1, [1, -0.01], "b")])
    tree = build_parent_tree([("Lbl", model, members)])
    tree.save(tmp_path / "tree.json", tmp_path / "tree.dot")
    dot = (tmp_path / "tree.dot").read_text()
    assert dot.startswith("graph")
    assert "--" in dot
