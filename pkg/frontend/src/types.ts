/** Payload shapes of the gramdex HTTP API (mirrored, never recomputed). */

export interface CorpusEntry {
  corpus_id: string;
  token_count: number;
  doc_count: number;
  index_size: number;
}

export interface CountResponse {
  query_tokens: string[];
  per_corpus: Record<string, number>;
  total: number;
}

export interface OverlapRow {
  line: number;
  tokens: string[];
  counts: Record<string, number>;
  total: number;
}

/** Aggregated matrices: ratio rows are null when not applicable. */
export interface BenchmarkMatrices {
  ks: number[];
  thresholds: number[];
  bins: [number, number][];
  instance_count: number;
  hit_ratio: Record<string, (number[] | null)>;
  hit_ratio_support: Record<string, number>;
  hit_length_ratio: (number[] | null)[];
  hit_length_ratio_support: number[];
}

export interface OverlapReport {
  line_count: number;
  rows: OverlapRow[];
  benchmark?: BenchmarkMatrices;
}

export interface JobStatus {
  job_id: string;
  status: "queued" | "running" | "done" | "failed";
  created_at: number;
  started_at: number | null;
  finished_at: number | null;
  result_url?: string;
  error?: string;
}

export interface NoveltySpan {
  start: number;
  end: number;
  total_count: number;
}

export interface NoveltyReport {
  tokens: string[];
  min_len: number;
  threshold: number;
  spans: NoveltySpan[];
  window_counts: number[];
}
