/** Novelty view contract: exactly the recorded spans, nothing recomputed. */

import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { coverage, renderInlineHighlights, renderNoveltyView, renderSpanList } from "../src/highlight.js";
import type { NoveltyReport } from "../src/types.js";

const report: NoveltyReport = JSON.parse(
  readFileSync(new URL("./fixtures/novelty.json", import.meta.url), "utf-8"),
);

describe("span list from the recorded fixture", () => {
  it("renders one entry per span with verbatim offsets and counts", () => {
    const html = renderSpanList(report);
    const items = [...html.matchAll(/<li data-start="(\d+)" data-end="(\d+)" data-count="(\d+)">/g)];
    expect(items).toHaveLength(report.spans.length);
    items.forEach(([, start, end, count], i) => {
      expect(Number(start)).toBe(report.spans[i].start);
      expect(Number(end)).toBe(report.spans[i].end);
      expect(Number(count)).toBe(report.spans[i].total_count);
    });
  });

  it("shows the span text from the response tokens", () => {
    const html = renderSpanList(report);
    for (const span of report.spans) {
      expect(html).toContain(report.tokens.slice(span.start, span.end).join(" "));
    }
  });
});

describe("inline highlighting", () => {
  it("marks exactly the covered tokens", () => {
    const cover = coverage(report.tokens.length, report.spans);
    const html = renderInlineHighlights(report);
    const marked = [...html.matchAll(/<mark class="hit"[^>]*>([^<]*)<\/mark>/g)]
      .flatMap((m) => m[1].split(" "));
    const expected = report.tokens.filter((_, i) => cover[i].length > 0);
    expect(marked).toEqual(expected);
  });

  it("hover titles carry the span counts", () => {
    const html = renderInlineHighlights(report);
    for (const span of report.spans) {
      expect(html).toContain(`[${span.start},${span.end}) seen ${span.total_count}×`);
    }
  });

  it("novel text renders with no marks", () => {
    const novel: NoveltyReport = {
      tokens: ["entirely", "new", "words"],
      min_len: 2,
      threshold: 1,
      spans: [],
      window_counts: [0, 0],
    };
    expect(renderInlineHighlights(novel)).not.toContain("<mark");
    expect(renderSpanList(novel)).toContain("No spans of 2+ tokens");
  });

  it("escapes markup in tokens", () => {
    const hostile: NoveltyReport = {
      tokens: ["<script>", "alert"],
      min_len: 1,
      threshold: 1,
      spans: [{ start: 0, end: 1, total_count: 3 }],
      window_counts: [3, 0],
    };
    const html = renderNoveltyView(hostile);
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });

  it("overlapping spans keep both hover entries", () => {
    const overlapping: NoveltyReport = {
      tokens: ["a", "b", "c", "d"],
      min_len: 2,
      threshold: 1,
      spans: [
        { start: 0, end: 3, total_count: 2 },
        { start: 1, end: 4, total_count: 1 },
      ],
      window_counts: [2, 2, 1],
    };
    const html = renderInlineHighlights(overlapping);
    expect(html).toContain("[0,3) seen 2×");
    expect(html).toContain("[1,4) seen 1×");
    const list = renderSpanList(overlapping);
    expect([...list.matchAll(/<li /g)]).toHaveLength(2);
  });
});
