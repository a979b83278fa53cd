/** Query console: an n-gram count grid grouped by n with per-corpus columns.
 *
 * The client only enumerates the windows of the server-tokenized query;
 * every count in the grid comes verbatim from the /overlap response.
 */

import type { OverlapReport } from "./types.js";

export interface GridRow {
  n: number;
  tokens: string[];
  counts: Record<string, number>;
  total: number;
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** All windows of the query tokens, n ascending then position (n*(n+1)/2 rows). */
export function enumerateWindows(tokens: string[], maxN?: number): string[][] {
  const limit = Math.min(maxN ?? tokens.length, tokens.length);
  const windows: string[][] = [];
  for (let n = 1; n <= limit; n++) {
    for (let i = 0; i + n <= tokens.length; i++) {
      windows.push(tokens.slice(i, i + n));
    }
  }
  return windows;
}

/** Pair the enumerated windows with the per-line counts of the report. */
export function buildGridRows(windows: string[][], report: OverlapReport): GridRow[] {
  if (report.rows.length !== windows.length) {
    throw new Error(
      `report has ${report.rows.length} rows for ${windows.length} windows`,
    );
  }
  return report.rows.map((row, i) => ({
    n: windows[i].length,
    tokens: row.tokens,
    counts: row.counts,
    total: row.total,
  }));
}

export function renderQueryGrid(rows: GridRow[], corpusIds: string[]): string {
  const head = ["n", "n-gram", ...corpusIds, "total"]
    .map((h) => `<th>${escapeHtml(h)}</th>`)
    .join("");
  const body = rows
    .map((row) => {
      const cells = [
        `<td class="n">${row.n}</td>`,
        `<td class="gram">${escapeHtml(row.tokens.join(" "))}</td>`,
        ...corpusIds.map((cid) => `<td class="count">${row.counts[cid] ?? 0}</td>`),
        `<td class="count total">${row.total}</td>`,
      ];
      return `<tr class="n${row.n}">${cells.join("")}</tr>`;
    })
    .join("\n");
  return `<table class="count-grid"><thead><tr>${head}</tr></thead><tbody>\n${body}\n</tbody></table>`;
}
