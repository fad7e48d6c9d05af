"""Quantitative reports: purity, within/cross separation, concept table."""

import json
from dataclasses import dataclass

import numpy as np

from . import geometry
from .errors import LabelMismatch
from .fileio import atomic_write_text


@dataclass(frozen=True)
class SeparationReport:
    within: geometry.Histogram | None
    cross: geometry.Histogram | None
    mean_gap: float | None
    n_within: int
    n_cross: int

    def to_dict(self):
        return {
            "within": self.within.to_dict() if self.within else None,
            "cross": self.cross.to_dict() if self.cross else None,
            "mean_gap": self.mean_gap,
            "n_within": self.n_within,
            "n_cross": self.n_cross,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def save(self, path):
        atomic_write_text(path, self.to_json())


@dataclass(frozen=True)
class ConceptReport:
    rows: list  # [{"concept_label", "canonical_term", "cluster_size", "centroid_cosine"}]

    def to_json(self):
        return json.dumps({"rows": self.rows}, ensure_ascii=False, indent=2)

    def to_text(self) -> str:
        """Two-column plain-text table: concept label vs canonical term."""
        left = max([len("Concept")] + [len(r["concept_label"]) for r in self.rows])
        lines = [f"{'Concept'.ljust(left)}  Term (closest to the cluster center)"]
        for r in self.rows:
            lines.append(f"{r['concept_label'].ljust(left)}  {r['canonical_term']}")
        return "\n".join(lines) + "\n"

    def save(self, json_path, text_path=None):
        atomic_write_text(json_path, self.to_json())
        if text_path:
            atomic_write_text(text_path, self.to_text())


def purity(assignments, gold_labels) -> float:
    """Fraction of points covered by their cluster's majority gold label."""
    assignments = list(assignments)
    gold_labels = list(gold_labels)
    if len(assignments) != len(gold_labels):
        raise LabelMismatch(
            f"{len(assignments)} assignments vs {len(gold_labels)} gold labels"
        )
    if not assignments:
        raise LabelMismatch("empty point set")
    clusters = {}
    for c, g in zip(assignments, gold_labels):
        clusters.setdefault(c, {}).setdefault(g, 0)
        clusters[c][g] += 1
    majority = sum(max(counts.values()) for counts in clusters.values())
    return majority / len(assignments)


def separation_report(index, store) -> SeparationReport:
    """Within- vs cross-concept similarity histograms and their raw mean gap."""
    within, cross = geometry.within_cross_values(index, store)
    hist_w = geometry.histogram(within) if within else None
    hist_c = geometry.histogram(cross) if cross else None
    gap = None
    if within and cross:
        gap = float(np.mean(within) - np.mean(cross))
    return SeparationReport(
        within=hist_w,
        cross=hist_c,
        mean_gap=gap,
        n_within=len(within),
        n_cross=len(cross),
    )


def concept_report(clustered) -> ConceptReport:
    """One row per cluster, sorted by concept label.

    `clustered` is a list of (label, model, members) triples as consumed by
    cluster.build_parent_tree.
    """
    from .cluster import canonical_term

    rows = []
    for label, model, members in clustered:
        k = model.centroids.shape[0]
        for c in range(k):
            idx = [i for i in range(len(members)) if model.assignments[i] == c]
            if not idx:
                continue
            term = canonical_term(model, c, members)
            vec = next(m.vector for m in members if m.term == term)
            rows.append(
                {
                    "concept_label": label,
                    "canonical_term": term,
                    "cluster_size": len(idx),
                    "centroid_cosine": float(vec @ model.centroids[c]),
                }
            )
    rows.sort(key=lambda r: r["concept_label"])
    return ConceptReport(rows=rows)
