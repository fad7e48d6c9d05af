/*
Typed client for the workbench HTTP service.

Every number the studio displays comes through here; the UI does no local
numerics. Error payloads ({code, message, detail}) surface as ApiError.
*/

export interface Point {
    term_id: string;
    term: string;
    concept: string | null;
    x: number | null;
    y: number | null;
    group_id?: string;
    cluster_id?: number;
}

export interface VersionResponse {
    version: number;
}

export interface ClusterInfo {
    cluster_id: number;
    parent: string;
    members: string[];
    size: number;
}

export interface ClusterRunResponse {
    objective: number;
    iterations_run: number;
    converged: boolean;
    clusters: ClusterInfo[];
}

export interface HistogramResponse {
    edges: number[];
    counts: number[];
    n: number;
    mean: number | null;
    std: number | null;
}

export interface ConceptsResponse {
    concepts: Record<string, string[]>;
    conflicts: unknown[];
}

export type HistogramScope = "within" | "cross" | `concept:${string}`;

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
    constructor(
        public readonly status: number,
        public readonly code: string,
        message: string,
        public readonly detail: unknown = null,
    ) {
        super(message);
        this.name = "ApiError";
    }
}

export class ApiClient {
    constructor(
        private readonly baseUrl: string = "",
        private readonly fetchFn: FetchLike = (...args) => fetch(...args),
    ) {}

    private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
        const init: RequestInit = { method, headers: { "Content-Type": "application/json" } };
        if (body !== undefined) {
            init.body = JSON.stringify(body);
        }
        let resp: Response;
        try {
            resp = await this.fetchFn(this.baseUrl + path, init);
        } catch (err) {
            throw new ApiError(0, "ServiceUnreachable", `service unreachable: ${String(err)}`);
        }
        const payload = await resp.json();
        if (!resp.ok) {
            // contract errors arrive as {code, message, detail}
            const code = typeof payload?.code === "string" ? payload.code : "HttpError";
            const message = typeof payload?.message === "string" ? payload.message : resp.statusText;
            throw new ApiError(resp.status, code, message, payload?.detail ?? null);
        }
        return payload as T;
    }

    getPoints(): Promise<Point[]> {
        return this.request("GET", "/api/points");
    }

    getConcepts(): Promise<ConceptsResponse> {
        return this.request("GET", "/api/concepts");
    }

    createGroup(groupId: string, termIds: string[]): Promise<VersionResponse> {
        return this.request("POST", "/api/groups", { group_id: groupId, term_ids: termIds });
    }

    setLabel(groupId: string, label: string): Promise<VersionResponse> {
        return this.request("POST", "/api/labels", { group_id: groupId, label });
    }

    project(nNeighbors: number, minDist: number, seed: number): Promise<{ projection_id: string }> {
        return this.request("POST", "/api/project", {
            n_neighbors: nNeighbors,
            min_dist: minDist,
            seed,
        });
    }

    runCluster(groupId: string | null, k: number, seed: number): Promise<ClusterRunResponse> {
        return this.request("POST", "/api/cluster/run", { group_id: groupId, k, seed });
    }

    getHistogram(scope: HistogramScope): Promise<HistogramResponse> {
        return this.request("GET", `/api/histogram?scope=${encodeURIComponent(scope)}`);
    }

    saveSession(): Promise<{ path: string; version: number }> {
        return this.request("POST", "/api/session/save");
    }
}
