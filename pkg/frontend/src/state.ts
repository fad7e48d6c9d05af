/*
View state for the studio. Holds what is loaded and what is selected;
the invariant selection ⊆ loaded points is enforced on every update.
*/

import type { Point } from "./api.js";

export type ColorBy = "concept" | "group" | "cluster";
export type HistogramScope = "within" | "cross" | `concept:${string}`;

export class ViewState {
    points: Point[] = [];
    selection = new Set<string>();
    activeGroup: string | null = null;
    colorBy: ColorBy = "concept";
    histogramScope: HistogramScope = "within";
    /** Session version as last reported by the service. */
    version = 0;

    setPoints(points: Point[]): void {
        this.points = points;
        const known = new Set(points.map((p) => p.term_id));
        this.selection = new Set([...this.selection].filter((id) => known.has(id)));
    }

    setSelection(termIds: Iterable<string>): void {
        const known = new Set(this.points.map((p) => p.term_id));
        this.selection = new Set([...termIds].filter((id) => known.has(id)));
    }

    clearSelection(): void {
        this.selection.clear();
    }

    /** Group/label actions are disabled on an empty selection. */
    get canGroup(): boolean {
        return this.selection.size > 0;
    }

    selectedPoints(): Point[] {
        return this.points.filter((p) => this.selection.has(p.term_id));
    }
}

const PALETTE = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ab",
];

/** Stable categorical color for a point under the current color-by mode. */
export function colorFor(point: Point, mode: ColorBy, categories: string[]): string {
    const key =
        mode === "concept"
            ? point.concept
            : mode === "group"
              ? (point.group_id ?? null)
              : point.cluster_id !== undefined
                ? String(point.cluster_id)
                : null;
    if (key === null) {
        return "#cccccc";
    }
    const idx = categories.indexOf(key);
    return PALETTE[(idx >= 0 ? idx : categories.length) % PALETTE.length];
}

/** Ordered category keys present in the data for a color-by mode. */
export function categoriesFor(points: Point[], mode: ColorBy): string[] {
    const seen: string[] = [];
    for (const p of points) {
        const key =
            mode === "concept"
                ? p.concept
                : mode === "group"
                  ? (p.group_id ?? null)
                  : p.cluster_id !== undefined
                    ? String(p.cluster_id)
                    : null;
        if (key !== null && !seen.includes(key)) {
            seen.push(key);
        }
    }
    return seen;
}
