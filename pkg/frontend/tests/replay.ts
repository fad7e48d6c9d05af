/*
Mock fetch that replays recorded service responses.

fixtures/recorded.json is captured from the real HTTP service by
scripts/record_fixtures.py; each (method, path) keys a FIFO queue so
repeated calls (e.g. GET /api/points before and after mutations) replay
in recorded order. POST bodies must match what was recorded.
*/

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import type { FetchLike } from "../src/api.js";

interface RecordedCall {
    method: string;
    path: string;
    body: unknown;
    status: number;
    response: unknown;
}

export interface Recorded {
    lasso: { polygon: [number, number][]; expected_term_ids: string[]; concept: string };
    planted_parent: string;
    calls: RecordedCall[];
}

const FIXTURE_PATH = join(dirname(fileURLToPath(import.meta.url)), "fixtures", "recorded.json");

export function loadRecorded(): Recorded {
    return JSON.parse(readFileSync(FIXTURE_PATH, "utf-8"));
}

export function recordedResponse(recorded: Recorded, method: string, path: string): unknown {
    const call = recorded.calls.find((c) => c.method === method && c.path === path);
    if (!call) {
        throw new Error(`no recorded call for ${method} ${path}`);
    }
    return call.response;
}

export function replayFetch(recorded: Recorded): FetchLike {
    const queues = new Map<string, RecordedCall[]>();
    for (const call of recorded.calls) {
        const key = `${call.method} ${call.path}`;
        if (!queues.has(key)) {
            queues.set(key, []);
        }
        queues.get(key)!.push(call);
    }
    return async (input, init) => {
        const method = init?.method ?? "GET";
        const key = `${method} ${input}`;
        const queue = queues.get(key);
        if (!queue || queue.length === 0) {
            throw new Error(`no recorded response left for ${key}`);
        }
        // replay in order, but keep the final recording for extra reads
        const call = queue.length > 1 ? queue.shift()! : queue[0];
        if (method === "POST" && call.body !== null) {
            const sent = JSON.parse((init?.body as string) ?? "null");
            const expected = JSON.stringify(call.body);
            const got = JSON.stringify(sent);
            if (got !== expected) {
                throw new Error(`body mismatch for ${key}:\n  sent ${got}\n  recorded ${expected}`);
            }
        }
        return new Response(JSON.stringify(call.response), {
            status: call.status,
            headers: { "Content-Type": "application/json" },
        });
    };
}
