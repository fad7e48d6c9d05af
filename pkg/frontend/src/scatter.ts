/*
Pure view models for the scatter plot and histogram panel. No DOM here:
the functions turn API data plus view state into renderable marks, which
keeps them testable and keeps all numerics traceable to API responses.
*/

import type { HistogramResponse, Point } from "./api.js";
import { categoriesFor, colorFor, type ColorBy, ViewState } from "./state.js";

export interface Mark {
    term_id: string;
    /** Screen position in pixels. */
    px: number;
    py: number;
    color: string;
    selected: boolean;
    tooltip: string;
}

export interface Viewport {
    width: number;
    height: number;
    margin: number;
}

export function tooltipText(point: Point): string {
    return point.concept === null ? point.term : `${point.term} — ${point.concept}`;
}

/** Linear map of data coordinates onto the viewport; y grows upward on screen. */
export function scatterMarks(state: ViewState, view: Viewport, colorBy?: ColorBy): Mark[] {
    const mode = colorBy ?? state.colorBy;
    const placed = state.points.filter((p) => p.x !== null && p.y !== null);
    if (placed.length === 0) {
        return [];
    }
    const xs = placed.map((p) => p.x as number);
    const ys = placed.map((p) => p.y as number);
    const xMin = Math.min(...xs);
    const xMax = Math.max(...xs);
    const yMin = Math.min(...ys);
    const yMax = Math.max(...ys);
    const xSpan = xMax - xMin || 1;
    const ySpan = yMax - yMin || 1;
    const innerW = view.width - 2 * view.margin;
    const innerH = view.height - 2 * view.margin;
    const categories = categoriesFor(placed, mode);
    return placed.map((p) => ({
        term_id: p.term_id,
        px: view.margin + (((p.x as number) - xMin) / xSpan) * innerW,
        py: view.margin + ((yMax - (p.y as number)) / ySpan) * innerH,
        color: colorFor(p, mode, categories),
        selected: state.selection.has(p.term_id),
        tooltip: tooltipText(p),
    }));
}

export interface HistogramBar {
    x0: number;
    x1: number;
    count: number;
}

export interface HistogramView {
    bars: HistogramBar[];
    n: number;
    mean: number | null;
    std: number | null;
    emptyMessage: string | null;
}

export function histogramView(hist: HistogramResponse): HistogramView {
    if (hist.n === 0 || hist.counts.length === 0) {
        return {
            bars: [],
            n: 0,
            mean: null,
            std: null,
            emptyMessage: "No pairs in this scope.",
        };
    }
    const bars = hist.counts.map((count, i) => ({
        x0: hist.edges[i],
        x1: hist.edges[i + 1],
        count,
    }));
    return { bars, n: hist.n, mean: hist.mean, std: hist.std, emptyMessage: null };
}
