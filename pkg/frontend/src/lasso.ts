/*
Freeform-polygon selection. Ray casting with the even-odd rule; points on an
edge count as inside, which errs toward selecting a hovered boundary point.
*/

export type Vertex = [number, number];

export function pointInPolygon(x: number, y: number, polygon: Vertex[]): boolean {
    if (polygon.length < 3) {
        return false;
    }
    let inside = false;
    for (let i = 0, j = polygon.length - 1; i < polygon.length; j = i++) {
        const [xi, yi] = polygon[i];
        const [xj, yj] = polygon[j];
        if (onSegment(x, y, xi, yi, xj, yj)) {
            return true;
        }
        const crosses = yi > y !== yj > y && x < ((xj - xi) * (y - yi)) / (yj - yi) + xi;
        if (crosses) {
            inside = !inside;
        }
    }
    return inside;
}

function onSegment(x: number, y: number, x1: number, y1: number, x2: number, y2: number): boolean {
    const cross = (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1);
    if (Math.abs(cross) > 1e-12) {
        return false;
    }
    return (
        Math.min(x1, x2) - 1e-12 <= x &&
        x <= Math.max(x1, x2) + 1e-12 &&
        Math.min(y1, y2) - 1e-12 <= y &&
        y <= Math.max(y1, y2) + 1e-12
    );
}

/** Term ids of the points falling inside the lasso polygon. */
export function lassoSelect(
    points: { term_id: string; x: number | null; y: number | null }[],
    polygon: Vertex[],
): string[] {
    return points
        .filter((p) => p.x !== null && p.y !== null && pointInPolygon(p.x, p.y, polygon))
        .map((p) => p.term_id);
}
