/*
Studio orchestrator: wires the API client to the view state.

Mutations are optimistic — the local view recolors immediately — and roll
back on API failure. Every mutation response carries the session version;
a version that jumped further than expected means someone else wrote to
the session, so the studio refreshes its points.
*/

import { ApiClient, type ClusterRunResponse, type HistogramScope } from "./api.js";
import { lassoSelect, type Vertex } from "./lasso.js";
import { histogramView, type HistogramView } from "./scatter.js";
import { ViewState } from "./state.js";

export interface ClusterPanel {
    objective: number;
    converged: boolean;
    clusters: { clusterId: number; parent: string; members: string[]; size: number }[];
}

export class Studio {
    readonly state = new ViewState();

    constructor(private readonly api: ApiClient) {}

    async loadPoints(): Promise<number> {
        this.state.setPoints(await this.api.getPoints());
        return this.state.points.length;
    }

    lasso(polygon: Vertex[]): number {
        this.state.setSelection(lassoSelect(this.state.points, polygon));
        return this.state.selection.size;
    }

    /** Assign the current selection to a group and label it: two session
     * mutations, so the version advances by exactly two on success. */
    async groupAndLabel(groupId: string, label: string): Promise<number> {
        if (!this.state.canGroup) {
            throw new Error("grouping is disabled: selection is empty");
        }
        const termIds = [...this.state.selection];
        const before = this.state.points;
        // optimistic recolor: tag selected points with the new group locally
        this.state.points = this.state.points.map((p) =>
            this.state.selection.has(p.term_id) ? { ...p, group_id: groupId } : p,
        );
        try {
            const afterGroup = await this.api.createGroup(groupId, termIds);
            this.checkVersion(afterGroup.version);
            const afterLabel = await this.api.setLabel(groupId, label);
            this.checkVersion(afterLabel.version);
        } catch (err) {
            this.state.points = before; // roll back the optimistic recolor
            throw err;
        }
        this.state.activeGroup = groupId;
        await this.refresh();
        return this.state.version;
    }

    async relabel(groupId: string, label: string): Promise<number> {
        const resp = await this.api.setLabel(groupId, label);
        this.checkVersion(resp.version);
        return this.state.version;
    }

    async runCluster(groupId: string | null, k: number, seed: number): Promise<ClusterPanel> {
        const resp: ClusterRunResponse = await this.api.runCluster(groupId, k, seed);
        await this.refresh(); // pick up cluster ids for color-by-cluster
        return {
            objective: resp.objective,
            converged: resp.converged,
            clusters: resp.clusters.map((c) => ({
                clusterId: c.cluster_id,
                parent: c.parent,
                members: c.members,
                size: c.size,
            })),
        };
    }

    async histogram(scope: HistogramScope): Promise<HistogramView> {
        this.state.histogramScope = scope;
        return histogramView(await this.api.getHistogram(scope));
    }

    async refresh(): Promise<void> {
        this.state.setPoints(await this.api.getPoints());
    }

    private checkVersion(reported: number): void {
        const stale = reported > this.state.version + 1;
        this.state.version = reported;
        if (stale) {
            void this.refresh();
        }
    }
}
