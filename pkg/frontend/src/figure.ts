/**
 * SVG line-figure builder for sweep results: one curve per scheme with
 * standard-error bars. Rendering is a pure function of the parsed rows and
 * the figure spec; styling is a fixed lookup keyed by scheme name so the
 * same scheme looks identical across figures.
 */

import { CsvError, groupByScheme, SweepRow } from "./csv.js";

export interface FigureSpec {
  xColumn: string;
  title?: string;
  width?: number;
  height?: number;
}

interface SchemeStyle {
  color: string;
  dash: string;
  marker: "circle" | "square" | "diamond";
  label: string;
}

/** Fixed scheme order and styling, so figures are comparable across runs. */
export const SCHEME_STYLES: Record<string, SchemeStyle> = {
  upper_bound: { color: "#444444", dash: "6 3", marker: "diamond", label: "Upper bound (perfect CSI)" },
  proposed_perfect: { color: "#c0392b", dash: "", marker: "circle", label: "Proposed, perfect feedback" },
  proposed_finite: { color: "#e67e22", dash: "4 2", marker: "circle", label: "Proposed, finite feedback" },
  benchmark_perfect: { color: "#2471a3", dash: "", marker: "square", label: "DFT benchmark, perfect feedback" },
  benchmark_finite: { color: "#17a589", dash: "4 2", marker: "square", label: "DFT benchmark, finite feedback" },
};

const FALLBACK_COLORS = ["#7d3c98", "#9c640c", "#1e8449", "#616a6b"];

export const X_AXIS_LABELS: Record<string, string> = {
  snr_db: "Receive SNR (dB)",
  feedback_bits: "Feedback bits",
  pilot_len: "Pilot length K (symbols)",
  block_len: "Coherence block length T (symbols)",
};

export const Y_AXIS_LABEL = "Average achievable rate (bits/s/Hz)";

function styleFor(scheme: string, fallbackIndex: number): SchemeStyle {
  const known = SCHEME_STYLES[scheme];
  if (known) return known;
  return {
    color: FALLBACK_COLORS[fallbackIndex % FALLBACK_COLORS.length],
    dash: "",
    marker: "circle",
    label: scheme,
  };
}

function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 2.5 * step, 5 * step, 10 * step];
  const chosen = candidates.find((s) => span / s <= count) ?? 10 * step;
  const start = Math.ceil(lo / chosen) * chosen;
  const ticks: number[] = [];
  for (let v = start; v <= hi + 1e-12; v += chosen) ticks.push(Number(v.toPrecision(12)));
  return ticks;
}

function fmt(v: number): string {
  return Number(v.toPrecision(6)).toString();
}

function markerElement(style: SchemeStyle, x: number, y: number): string {
  const r = 3;
  switch (style.marker) {
    case "circle":
      return `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${style.color}"/>`;
    case "square":
      return `<rect x="${fmt(x - r)}" y="${fmt(y - r)}" width="${2 * r}" height="${2 * r}" fill="${style.color}"/>`;
    case "diamond":
      return `<path d="M ${fmt(x)} ${fmt(y - r - 1)} L ${fmt(x + r + 1)} ${fmt(y)} L ${fmt(x)} ${fmt(y + r + 1)} L ${fmt(x - r - 1)} ${fmt(y)} Z" fill="${style.color}"/>`;
  }
}

export function buildFigureSvg(rows: SweepRow[], spec: FigureSpec): string {
  if (rows.length === 0) {
    throw new CsvError("no data rows to plot");
  }
  const variables = new Set(rows.map((r) => r.variable));
  if (!variables.has(spec.xColumn)) {
    throw new CsvError(
      `x column '${spec.xColumn}' not present in CSV (variable column holds: ${[...variables].join(", ")})`
    );
  }
  const relevant = rows.filter((r) => r.variable === spec.xColumn);
  const series = groupByScheme(relevant);

  const width = spec.width ?? 720;
  const height = spec.height ?? 480;
  const margin = { left: 70, right: 20, top: 40, bottom: 55 };
  const plotW = width - margin.left - margin.right;
  const plotH = height - margin.top - margin.bottom;

  const xs = relevant.map((r) => r.value);
  let xLo = Math.min(...xs);
  let xHi = Math.max(...xs);
  if (xLo === xHi) {
    // degenerate single-value sweep: open a symmetric window
    const pad = Math.max(1, Math.abs(xLo) * 0.1);
    xLo -= pad;
    xHi += pad;
  }
  const yHiData = Math.max(...relevant.map((r) => r.meanRate + r.stderrRate));
  const yLo = 0;
  const yHi = yHiData > 0 ? yHiData * 1.05 : 1;

  const sx = (v: number) => margin.left + ((v - xLo) / (xHi - xLo)) * plotW;
  const sy = (v: number) => margin.top + plotH - ((v - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  if (spec.title) {
    parts.push(
      `<text class="title" x="${width / 2}" y="22" text-anchor="middle" font-size="15">${spec.title}</text>`
    );
  }

  // frame and grid
  parts.push(
    `<rect x="${margin.left}" y="${margin.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#999"/>`
  );
  for (const t of niceTicks(xLo, xHi)) {
    const x = sx(t);
    parts.push(`<line x1="${fmt(x)}" y1="${margin.top + plotH}" x2="${fmt(x)}" y2="${margin.top + plotH + 5}" stroke="#333"/>`);
    parts.push(
      `<text x="${fmt(x)}" y="${margin.top + plotH + 20}" text-anchor="middle" font-size="11">${fmt(t)}</text>`
    );
  }
  for (const t of niceTicks(yLo, yHi)) {
    const y = sy(t);
    parts.push(`<line x1="${margin.left - 5}" y1="${fmt(y)}" x2="${margin.left}" y2="${fmt(y)}" stroke="#333"/>`);
    parts.push(`<line x1="${margin.left}" y1="${fmt(y)}" x2="${margin.left + plotW}" y2="${fmt(y)}" stroke="#eee"/>`);
    parts.push(
      `<text x="${margin.left - 9}" y="${fmt(y + 4)}" text-anchor="end" font-size="11">${fmt(t)}</text>`
    );
  }

  // axis labels
  const xLabel = X_AXIS_LABELS[spec.xColumn] ?? spec.xColumn;
  parts.push(
    `<text class="x-label" x="${margin.left + plotW / 2}" y="${height - 12}" text-anchor="middle" font-size="13">${xLabel}</text>`
  );
  parts.push(
    `<text class="y-label" x="18" y="${margin.top + plotH / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 18 ${margin.top + plotH / 2})">${Y_AXIS_LABEL}</text>`
  );

  // curves in fixed order: known schemes first (styling table order), then extras
  const order = [
    ...Object.keys(SCHEME_STYLES).filter((s) => series.has(s)),
    ...[...series.keys()].filter((s) => !(s in SCHEME_STYLES)).sort(),
  ];
  let fallbackIndex = 0;
  order.forEach((scheme) => {
    const style = styleFor(scheme, fallbackIndex);
    if (!(scheme in SCHEME_STYLES)) fallbackIndex += 1;
    const points = series.get(scheme)!;
    const coords = points.map((p) => `${fmt(sx(p.value))},${fmt(sy(p.meanRate))}`).join(" ");
    // error bars first so the curve draws on top
    for (const p of points) {
      if (p.stderrRate > 0) {
        const x = sx(p.value);
        const y1 = sy(p.meanRate - p.stderrRate);
        const y2 = sy(p.meanRate + p.stderrRate);
        parts.push(
          `<g class="errbar" data-scheme="${scheme}" stroke="${style.color}">` +
            `<line x1="${fmt(x)}" y1="${fmt(y1)}" x2="${fmt(x)}" y2="${fmt(y2)}"/>` +
            `<line x1="${fmt(x - 3)}" y1="${fmt(y1)}" x2="${fmt(x + 3)}" y2="${fmt(y1)}"/>` +
            `<line x1="${fmt(x - 3)}" y1="${fmt(y2)}" x2="${fmt(x + 3)}" y2="${fmt(y2)}"/>` +
            `</g>`
        );
      }
    }
    const dash = style.dash ? ` stroke-dasharray="${style.dash}"` : "";
    parts.push(
      `<polyline class="curve" data-scheme="${scheme}" points="${coords}" fill="none" stroke="${style.color}" stroke-width="1.8"${dash}/>`
    );
    for (const p of points) {
      parts.push(markerElement(style, sx(p.value), sy(p.meanRate)));
    }
  });

  // legend
  const legendX = margin.left + 12;
  let legendY = margin.top + 14;
  for (const scheme of order) {
    const style = styleFor(scheme, 0);
    const dash = style.dash ? ` stroke-dasharray="${style.dash}"` : "";
    parts.push(
      `<g class="legend-entry" data-scheme="${scheme}">` +
        `<line x1="${legendX}" y1="${legendY - 4}" x2="${legendX + 26}" y2="${legendY - 4}" stroke="${style.color}" stroke-width="1.8"${dash}/>` +
        `<text x="${legendX + 32}" y="${legendY}" font-size="11">${style.label}</text>` +
        `</g>`
    );
    legendY += 16;
  }

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
