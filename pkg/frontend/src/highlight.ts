/** Novelty view: generated text with its memorized spans highlighted inline.
 *
 * Spans come verbatim from /novelty; they may overlap.  The inline view
 * marks every covered token (hover shows the covering spans' counts), and a
 * span list renders exactly one entry per reported span.
 */

import type { NoveltyReport, NoveltySpan } from "./types.js";
import { escapeHtml } from "./grid.js";

/** For each token index, the spans covering it. */
export function coverage(tokenCount: number, spans: NoveltySpan[]): NoveltySpan[][] {
  const cover: NoveltySpan[][] = Array.from({ length: tokenCount }, () => []);
  for (const span of spans) {
    for (let i = span.start; i < span.end && i < tokenCount; i++) {
      cover[i].push(span);
    }
  }
  return cover;
}

export function renderInlineHighlights(report: NoveltyReport): string {
  const cover = coverage(report.tokens.length, report.spans);
  const pieces: string[] = [];
  let i = 0;
  while (i < report.tokens.length) {
    if (cover[i].length === 0) {
      pieces.push(escapeHtml(report.tokens[i]));
      i++;
      continue;
    }
    // extend over the run of tokens covered by the same set of spans
    let j = i + 1;
    while (j < report.tokens.length && sameSpans(cover[i], cover[j])) j++;
    const text = escapeHtml(report.tokens.slice(i, j).join(" "));
    const title = cover[i]
      .map((s) => `[${s.start},${s.end}) seen ${s.total_count}×`)
      .join("; ");
    pieces.push(`<mark class="hit" title="${escapeHtml(title)}">${text}</mark>`);
    i = j;
  }
  return `<p class="novelty-text">${pieces.join(" ")}</p>`;
}

function sameSpans(a: NoveltySpan[], b: NoveltySpan[]): boolean {
  return a.length === b.length && a.every((s, i) => s === b[i]);
}

export function renderSpanList(report: NoveltyReport): string {
  if (report.spans.length === 0) {
    return `<p class="novelty-empty">No spans of ${report.min_len}+ tokens occur ` +
      `≥${report.threshold} times in the indexed corpora.</p>`;
  }
  const items = report.spans
    .map((s) => {
      const text = escapeHtml(report.tokens.slice(s.start, s.end).join(" "));
      return (
        `<li data-start="${s.start}" data-end="${s.end}" data-count="${s.total_count}">` +
        `<span class="span-text">${text}</span> ` +
        `<span class="span-count">${s.total_count}× in corpus</span></li>`
      );
    })
    .join("\n");
  return `<ul class="novelty-spans">\n${items}\n</ul>`;
}

export function renderNoveltyView(report: NoveltyReport): string {
  return `${renderInlineHighlights(report)}\n${renderSpanList(report)}`;
}
