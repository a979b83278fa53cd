/** Upload routing and job polling.
 *
 * Files at or under the live limit go to POST /overlap synchronously;
 * anything larger is routed to the batch-job form (the server enforces the
 * same 2 MiB rule authoritatively).  Polling backs off exponentially from
 * 500 ms, capped at 10 s.
 */

import type { ApiClient } from "./api.js";
import type { JobStatus, OverlapReport } from "./types.js";
import type { OverlapParams } from "./api.js";

export const LIVE_LIMIT_BYTES = 2 * 1024 * 1024;

export type UploadRoute = "live" | "batch";

export function routeForSize(bytes: number): UploadRoute {
  return bytes > LIVE_LIMIT_BYTES ? "batch" : "live";
}

export function backoffDelayMs(attempt: number, baseMs = 500, capMs = 10_000): number {
  return Math.min(capMs, baseMs * 2 ** attempt);
}

export interface PollHooks {
  sleep?: (ms: number) => Promise<void>;
  onStatus?: (status: JobStatus) => void;
  maxAttempts?: number;
}

const defaultSleep = (ms: number) => new Promise<void>((r) => setTimeout(r, ms));

/** Poll a job until it finishes; resolves with the terminal status. */
export async function pollJob(
  api: ApiClient,
  jobId: string,
  hooks: PollHooks = {},
): Promise<JobStatus> {
  const sleep = hooks.sleep ?? defaultSleep;
  const maxAttempts = hooks.maxAttempts ?? 1000;
  for (let attempt = 0; attempt < maxAttempts; attempt++) {
    const status = await api.jobStatus(jobId);
    hooks.onStatus?.(status);
    if (status.status === "done" || status.status === "failed") {
      return status;
    }
    await sleep(backoffDelayMs(attempt));
  }
  throw new Error(`job ${jobId} still running after ${maxAttempts} polls`);
}

export interface UploadOutcome {
  route: UploadRoute;
  report?: OverlapReport;
  jobId?: string;
}

/** Run an upload along the size-appropriate route and return the report. */
export async function runUpload(
  api: ApiClient,
  content: string | Blob,
  sizeBytes: number,
  params?: OverlapParams,
  hooks: PollHooks = {},
): Promise<UploadOutcome> {
  if (routeForSize(sizeBytes) === "live") {
    const report = await api.overlap(content, params);
    return { route: "live", report };
  }
  const { job_id } = await api.submitJob(content, params);
  const status = await pollJob(api, job_id, hooks);
  if (status.status === "failed") {
    throw new Error(status.error ?? "batch job failed");
  }
  const report = await api.jobResult(job_id);
  return { route: "batch", report, jobId: job_id };
}
