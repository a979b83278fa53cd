/** Browser wiring for the three console panels.
 *
 * All numbers on screen come from the API; this file only moves payloads
 * between fetch responses and the renderers.
 */

import { ApiClient, ApiError } from "./api.js";
import { hitLengthChartSpec, hitRatioChartSpec, renderGroupedBars } from "./charts.js";
import { buildGridRows, enumerateWindows, renderQueryGrid } from "./grid.js";
import { renderNoveltyView } from "./highlight.js";
import { initialViewState } from "./state.js";
import { LIVE_LIMIT_BYTES, routeForSize, runUpload } from "./upload.js";
import type { OverlapReport } from "./types.js";

const api = new ApiClient("");
const state = initialViewState();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function showError(target: HTMLElement, err: unknown): void {
  const message = err instanceof ApiError ? `${err.status}: ${err.message}` : String(err);
  target.innerHTML = `<p class="error">${message.replace(/</g, "&lt;")}</p>`;
}

async function refreshCorpora(): Promise<string[]> {
  const entries = await api.corpora();
  state.selectedCorpora = entries.map((e) => e.corpus_id);
  el("corpora").innerHTML = entries
    .map(
      (e) =>
        `<span class="corpus-chip" title="${e.doc_count} docs, ${e.index_size} bytes on disk">` +
        `${e.corpus_id} (${e.token_count.toLocaleString()} tokens)</span>`,
    )
    .join(" ");
  return state.selectedCorpora;
}

async function onQuery(): Promise<void> {
  const out = el("query-result");
  state.queryText = el<HTMLInputElement>("query-input").value;
  if (!state.queryText.trim()) return;
  out.innerHTML = "<p class='pending'>querying…</p>";
  try {
    // server-side tokenization first, then one /overlap call for all windows
    const count = await api.count(state.queryText);
    const windows = enumerateWindows(count.query_tokens);
    const report = await api.overlap(windows.map((w) => w.join(" ")).join("\n"));
    const rows = buildGridRows(windows, report);
    out.innerHTML = renderQueryGrid(rows, state.selectedCorpora);
  } catch (err) {
    showError(out, err);
  }
}

function renderReportCharts(report: OverlapReport): void {
  const target = el("charts");
  if (!report.benchmark) {
    target.innerHTML = "<p class='pending'>file had no non-empty lines</p>";
    return;
  }
  target.innerHTML =
    renderGroupedBars(hitRatioChartSpec(report.benchmark)) +
    renderGroupedBars(hitLengthChartSpec(report.benchmark));
}

async function onUpload(): Promise<void> {
  const input = el<HTMLInputElement>("ngram-file");
  const status = el("upload-status");
  const file = input.files?.[0];
  if (!file) return;
  state.uploadedFile = file;
  const route = routeForSize(file.size);
  status.textContent =
    route === "live"
      ? `computing synchronously (${file.size.toLocaleString()} bytes)…`
      : `file exceeds ${LIVE_LIMIT_BYTES.toLocaleString()} bytes; queued as a batch job…`;
  try {
    const outcome = await runUpload(api, file, file.size, undefined, {
      onStatus: (s) => {
        status.textContent = `job ${s.job_id}: ${s.status}…`;
        if (!state.pollingJobs.includes(s.job_id)) state.pollingJobs.push(s.job_id);
      },
    });
    status.textContent =
      outcome.route === "live" ? "done (live)" : `done (batch job ${outcome.jobId})`;
    if (outcome.report) renderReportCharts(outcome.report);
  } catch (err) {
    showError(el("charts"), err);
    status.textContent = "failed";
  }
}

async function onNovelty(): Promise<void> {
  const out = el("novelty-result");
  const text = el<HTMLTextAreaElement>("novelty-input").value;
  const minLen = Number(el<HTMLInputElement>("novelty-minlen").value) || 2;
  const threshold = Number(el<HTMLInputElement>("novelty-threshold").value) || 1;
  out.innerHTML = "<p class='pending'>checking…</p>";
  try {
    const report = await api.novelty(text, minLen, threshold);
    out.innerHTML = renderNoveltyView(report);
  } catch (err) {
    showError(out, err);
  }
}

export function start(): void {
  refreshCorpora().catch((err) => showError(el("corpora"), err));
  el("query-run").addEventListener("click", () => void onQuery());
  el<HTMLInputElement>("query-input").addEventListener("keydown", (e) => {
    if ((e as KeyboardEvent).key === "Enter") void onQuery();
  });
  el("ngram-file").addEventListener("change", () => void onUpload());
  el("novelty-run").addEventListener("click", () => void onNovelty());
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  start();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", start);
}
