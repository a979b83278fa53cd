/** Thin typed client for the gramdex service; the only data source of the UI. */

import type {
  CorpusEntry,
  CountResponse,
  JobStatus,
  NoveltyReport,
  OverlapReport,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export interface OverlapParams {
  thresholds?: number[];
  ks?: number[];
}

function overlapQuery(params?: OverlapParams): string {
  if (!params) return "";
  const parts: string[] = [];
  if (params.thresholds?.length) parts.push(`thresholds=${params.thresholds.join(",")}`);
  if (params.ks?.length) parts.push(`ks=${params.ks.join(",")}`);
  return parts.length ? `?${parts.join("&")}` : "";
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    const body = await response.text();
    if (!response.ok) {
      let message = `HTTP ${response.status}`;
      try {
        const parsed = JSON.parse(body) as { error?: string };
        if (parsed.error) message = parsed.error;
      } catch {
        /* non-JSON error body; keep the status line */
      }
      throw new ApiError(response.status, message);
    }
    return JSON.parse(body) as T;
  }

  corpora(): Promise<CorpusEntry[]> {
    return this.request<CorpusEntry[]>("/corpora");
  }

  count(q: string, corpus = "all"): Promise<CountResponse> {
    const query = `q=${encodeURIComponent(q)}&corpus=${encodeURIComponent(corpus)}`;
    return this.request<CountResponse>(`/count?${query}`);
  }

  overlap(content: string | Blob, params?: OverlapParams): Promise<OverlapReport> {
    return this.request<OverlapReport>(`/overlap${overlapQuery(params)}`, {
      method: "POST",
      body: content,
      headers: { "content-type": "text/plain; charset=utf-8" },
    });
  }

  submitJob(content: string | Blob, params?: OverlapParams): Promise<{ job_id: string }> {
    return this.request<{ job_id: string }>(`/jobs${overlapQuery(params)}`, {
      method: "POST",
      body: content,
      headers: { "content-type": "text/plain; charset=utf-8" },
    });
  }

  jobStatus(jobId: string): Promise<JobStatus> {
    return this.request<JobStatus>(`/jobs/${encodeURIComponent(jobId)}`);
  }

  jobResult(jobId: string): Promise<OverlapReport> {
    return this.request<OverlapReport>(`/jobs/${encodeURIComponent(jobId)}/result`);
  }

  novelty(text: string, minLen: number, threshold: number): Promise<NoveltyReport> {
    return this.request<NoveltyReport>("/novelty", {
      method: "POST",
      body: JSON.stringify({ text, min_len: minLen, threshold }),
      headers: { "content-type": "application/json" },
    });
  }
}
