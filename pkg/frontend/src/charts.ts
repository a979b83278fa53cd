/** Grouped-bar SVG charts of the aggregate overlap matrices.
 *
 * x-axis: k (or relative-length bin); one bar per threshold within a group,
 * legend ordered >=1 ... >=1M; y axis fixed to [0, 1].  Not-applicable rows
 * (null in the payload) draw no bars and add a legend note.  Bar heights are
 * taken verbatim from the matrices; nothing is recomputed client-side.
 */

import type { BenchmarkMatrices } from "./types.js";
import { escapeHtml } from "./grid.js";

export interface GroupedBarSpec {
  title: string;
  groupLabels: string[];
  seriesLabels: string[];
  /** values[group][series]; a null row renders no bars for that group */
  values: (number[] | null)[];
}

export function thresholdLabel(t: number): string {
  if (t >= 1_000_000 && t % 1_000_000 === 0) return `≥${t / 1_000_000}M`;
  if (t >= 1_000 && t % 1_000 === 0) return `≥${t / 1_000}k`;
  return `≥${t}`;
}

export function binLabel(bin: [number, number], last: boolean): string {
  return `[${bin[0]},${bin[1]}${last ? "]" : ")"}`;
}

export function hitRatioChartSpec(benchmark: BenchmarkMatrices): GroupedBarSpec {
  return {
    title: "Per-instance k-gram hit ratio (average)",
    groupLabels: benchmark.ks.map((k) => `k=${k}`),
    seriesLabels: benchmark.thresholds.map(thresholdLabel),
    values: benchmark.ks.map((k) => benchmark.hit_ratio[String(k)] ?? null),
  };
}

export function hitLengthChartSpec(benchmark: BenchmarkMatrices): GroupedBarSpec {
  return {
    title: "Per-instance hit length ratio (average)",
    groupLabels: benchmark.bins.map((b, i) => binLabel(b, i === benchmark.bins.length - 1)),
    seriesLabels: benchmark.thresholds.map(thresholdLabel),
    values: benchmark.hit_length_ratio,
  };
}

/** Crisp qualitative palette; cycles if there are more series than colors. */
const PALETTE = [
  "#4269d0", "#efb118", "#ff725c", "#6cc5b0", "#3ca951",
  "#ff8ab7", "#a463f2", "#97bbf5", "#9c6b4e", "#9498a0",
];

export interface ChartOptions {
  width?: number;
  height?: number;
}

export function renderGroupedBars(spec: GroupedBarSpec, options: ChartOptions = {}): string {
  const width = options.width ?? 640;
  const height = options.height ?? 280;
  const margin = { top: 28, right: 12, bottom: 34, left: 36 };
  const plotW = width - margin.left - margin.right;
  const plotH = height - margin.top - margin.bottom;
  const nGroups = spec.groupLabels.length;
  const nSeries = spec.seriesLabels.length;
  const groupW = plotW / Math.max(1, nGroups);
  const barW = (groupW * 0.82) / Math.max(1, nSeries);

  const parts: string[] = [];
  parts.push(
    `<svg class="grouped-bars" xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" role="img">`,
  );
  parts.push(`<title>${escapeHtml(spec.title)}</title>`);
  // y gridlines at 0, .25, .5, .75, 1
  for (let i = 0; i <= 4; i++) {
    const v = i / 4;
    const y = margin.top + plotH * (1 - v);
    parts.push(
      `<line class="grid" x1="${margin.left}" y1="${y}" x2="${width - margin.right}" y2="${y}" stroke="#ddd"/>`,
    );
    parts.push(
      `<text class="ytick" x="${margin.left - 6}" y="${y + 4}" text-anchor="end" font-size="10">${v}</text>`,
    );
  }

  let hasNa = false;
  spec.values.forEach((row, g) => {
    const x0 = margin.left + g * groupW + groupW * 0.09;
    if (row === null) {
      hasNa = true;
      parts.push(
        `<text class="na" x="${margin.left + g * groupW + groupW / 2}" y="${margin.top + plotH - 6}" text-anchor="middle" font-size="10" fill="#999">n/a</text>`,
      );
      return;
    }
    row.forEach((value, s) => {
      const clamped = Math.max(0, Math.min(1, value));
      const barH = plotH * clamped;
      const x = x0 + s * barW;
      const y = margin.top + plotH - barH;
      parts.push(
        `<rect class="bar" data-group="${g}" data-series="${s}" data-value="${value}" ` +
          `x="${x.toFixed(2)}" y="${y.toFixed(2)}" width="${Math.max(1, barW - 1).toFixed(2)}" ` +
          `height="${barH.toFixed(2)}" fill="${PALETTE[s % PALETTE.length]}">` +
          `<title>${escapeHtml(spec.groupLabels[g])} ${escapeHtml(spec.seriesLabels[s])}: ${value.toFixed(3)}</title></rect>`,
      );
    });
  });

  spec.groupLabels.forEach((label, g) => {
    const x = margin.left + g * groupW + groupW / 2;
    parts.push(
      `<text class="xtick" x="${x}" y="${height - margin.bottom + 14}" text-anchor="middle" font-size="11">${escapeHtml(label)}</text>`,
    );
  });

  // legend across the top, in series (threshold) order
  let lx = margin.left;
  spec.seriesLabels.forEach((label, s) => {
    parts.push(`<rect class="legend-swatch" x="${lx}" y="8" width="10" height="10" fill="${PALETTE[s % PALETTE.length]}"/>`);
    parts.push(`<text class="legend" x="${lx + 13}" y="17" font-size="10">${escapeHtml(label)}</text>`);
    lx += 13 + 8 * label.length + 14;
  });
  if (hasNa) {
    parts.push(
      `<text class="legend-note" x="${width - margin.right}" y="17" text-anchor="end" font-size="10" fill="#999">n/a: no applicable instances</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}
