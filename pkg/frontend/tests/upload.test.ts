/** Upload routing: the 2 MiB pre-check, backoff capping, and job polling. */

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import type { JobStatus } from "../src/types.js";
import {
  LIVE_LIMIT_BYTES,
  backoffDelayMs,
  pollJob,
  routeForSize,
  runUpload,
} from "../src/upload.js";

describe("client-side size pre-check", () => {
  it("mirrors the server limit exactly", () => {
    expect(LIVE_LIMIT_BYTES).toBe(2 * 1024 * 1024);
    expect(routeForSize(LIVE_LIMIT_BYTES - 1)).toBe("live");
    expect(routeForSize(LIVE_LIMIT_BYTES)).toBe("live");
    expect(routeForSize(LIVE_LIMIT_BYTES + 1)).toBe("batch");
  });
});

describe("polling backoff", () => {
  it("doubles from 500 ms and caps at 10 s", () => {
    expect([0, 1, 2, 3, 4, 5, 6, 9].map((a) => backoffDelayMs(a))).toEqual([
      500, 1000, 2000, 4000, 8000, 10000, 10000, 10000,
    ]);
  });
});

function fakeStatus(status: JobStatus["status"], jobId = "j1"): JobStatus {
  return {
    job_id: jobId,
    status,
    created_at: 0,
    started_at: null,
    finished_at: null,
    ...(status === "done" ? { result_url: `/jobs/${jobId}/result` } : {}),
  };
}

/** ApiClient whose fetch is scripted per URL. */
function scriptedClient(script: Record<string, unknown[] | unknown>): ApiClient {
  const fetchFn = (async (url: string | URL | Request) => {
    const path = String(url);
    const entry = script[path];
    const payload = Array.isArray(entry) ? entry.shift() : entry;
    if (payload === undefined) throw new Error(`no scripted response for ${path}`);
    return new Response(JSON.stringify(payload), { status: 200 });
  }) as typeof fetch;
  return new ApiClient("", fetchFn);
}

describe("pollJob", () => {
  it("repolls until done, sleeping with backoff", async () => {
    const api = scriptedClient({
      "/jobs/j1": [fakeStatus("queued"), fakeStatus("running"), fakeStatus("done")],
    });
    const sleeps: number[] = [];
    const seen: string[] = [];
    const status = await pollJob(api, "j1", {
      sleep: async (ms) => void sleeps.push(ms),
      onStatus: (s) => void seen.push(s.status),
    });
    expect(status.status).toBe("done");
    expect(seen).toEqual(["queued", "running", "done"]);
    expect(sleeps).toEqual([500, 1000]);
  });
});

describe("runUpload", () => {
  const report = { line_count: 1, rows: [] };

  it("small payloads go through POST /overlap", async () => {
    const api = scriptedClient({ "/overlap": report });
    const outcome = await runUpload(api, "the cat\n", 8);
    expect(outcome.route).toBe("live");
    expect(outcome.report).toEqual(report);
  });

  it("oversize payloads go to the batch form and poll to completion", async () => {
    const api = scriptedClient({
      "/jobs": { job_id: "j9" },
      "/jobs/j9": [fakeStatus("queued", "j9"), fakeStatus("done", "j9")],
      "/jobs/j9/result": report,
    });
    const outcome = await runUpload(api, "x", LIVE_LIMIT_BYTES + 1, undefined, {
      sleep: async () => {},
    });
    expect(outcome.route).toBe("batch");
    expect(outcome.jobId).toBe("j9");
    expect(outcome.report).toEqual(report);
  });

  it("a failed job surfaces its error", async () => {
    const api = scriptedClient({
      "/jobs": { job_id: "j2" },
      "/jobs/j2": [{ ...fakeStatus("failed", "j2"), error: "boom" }],
    });
    await expect(
      runUpload(api, "x", LIVE_LIMIT_BYTES + 1, undefined, { sleep: async () => {} }),
    ).rejects.toThrow("boom");
  });
});
