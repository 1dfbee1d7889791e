import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { CsvError, parseSweepCsv } from "../src/csv.js";
import { buildFigureSvg, X_AXIS_LABELS, Y_AXIS_LABEL } from "../src/figure.js";
import { main as renderMain } from "../src/render.js";

const SWEEPS = [
  { file: "rate_vs_snr_db.csv", x: "snr_db" },
  { file: "rate_vs_feedback_bits.csv", x: "feedback_bits" },
  { file: "rate_vs_pilot_len.csv", x: "pilot_len" },
  { file: "rate_vs_block_len.csv", x: "block_len" },
];

const SCHEMES = [
  "proposed_finite",
  "proposed_perfect",
  "benchmark_finite",
  "benchmark_perfect",
  "upper_bound",
];

function fixture(name: string): string {
  return readFileSync(join(__dirname, "..", "fixtures", name), "utf-8");
}

function countMatches(text: string, pattern: RegExp): number {
  return (text.match(pattern) ?? []).length;
}

describe("sweep CSV parsing", () => {
  it("parses the documented schema", () => {
    const rows = parseSweepCsv(fixture("rate_vs_snr_db.csv"));
    expect(rows.length % SCHEMES.length).toBe(0);
    expect(new Set(rows.map((r) => r.scheme))).toEqual(new Set(SCHEMES));
    expect(rows[0].variable).toBe("snr_db");
    expect(rows.every((r) => Number.isFinite(r.meanRate))).toBe(true);
  });

  it("rejects an empty file", () => {
    expect(() => parseSweepCsv("")).toThrow(CsvError);
    expect(() => parseSweepCsv("variable,value,scheme,mean_rate,stderr_rate,trials,seed\n")).toThrow(
      /no data rows/
    );
  });

  it("names missing columns", () => {
    expect(() => parseSweepCsv("variable,value,scheme\nsnr_db,0,x\n")).toThrow(
      /mean_rate, stderr_rate, trials, seed/
    );
  });
});

describe("figure structure (golden checks)", () => {
  for (const sweep of SWEEPS) {
    it(`renders ${sweep.file} with one curve per scheme and error bars`, () => {
      const rows = parseSweepCsv(fixture(sweep.file));
      const svg = buildFigureSvg(rows, { xColumn: sweep.x });
      expect(countMatches(svg, /class="curve"/g)).toBe(SCHEMES.length);
      for (const scheme of SCHEMES) {
        expect(svg).toContain(`<polyline class="curve" data-scheme="${scheme}"`);
      }
      // error bars exist for every Monte Carlo scheme (the deterministic
      // upper bound has zero stderr and may legitimately have none)
      for (const scheme of SCHEMES.filter((s) => s !== "upper_bound")) {
        expect(countMatches(svg, new RegExp(`class="errbar" data-scheme="${scheme}"`, "g"))).toBeGreaterThan(0);
      }
      expect(svg).toContain(`>${X_AXIS_LABELS[sweep.x]}</text>`);
      expect(svg).toContain(`>${Y_AXIS_LABEL}</text>`);
      expect(countMatches(svg, /class="legend-entry"/g)).toBe(SCHEMES.length);
    });
  }

  it("is deterministic for identical input", () => {
    const rows = parseSweepCsv(fixture("rate_vs_snr_db.csv"));
    const a = buildFigureSvg(rows, { xColumn: "snr_db", title: "t" });
    const b = buildFigureSvg(rows, { xColumn: "snr_db", title: "t" });
    expect(a).toBe(b);
  });

  it("plots a single-scheme CSV with one curve and legend entry", () => {
    const rows = parseSweepCsv(fixture("rate_vs_snr_db.csv")).filter(
      (r) => r.scheme === "proposed_finite"
    );
    const svg = buildFigureSvg(rows, { xColumn: "snr_db" });
    expect(countMatches(svg, /class="curve"/g)).toBe(1);
    expect(countMatches(svg, /class="legend-entry"/g)).toBe(1);
  });

  it("handles a degenerate single-x-value CSV", () => {
    const rows = parseSweepCsv(fixture("rate_vs_snr_db.csv")).filter((r) => r.value === 10);
    expect(rows.length).toBe(SCHEMES.length);
    const svg = buildFigureSvg(rows, { xColumn: "snr_db" });
    expect(countMatches(svg, /class="curve"/g)).toBe(SCHEMES.length);
  });

  it("rejects a wrong x column by name", () => {
    const rows = parseSweepCsv(fixture("rate_vs_snr_db.csv"));
    expect(() => buildFigureSvg(rows, { xColumn: "pilot_len" })).toThrow(/pilot_len/);
  });
});

describe("render CLI", () => {
  it("renders all four sweeps to SVG files", () => {
    const dir = mkdtempSync(join(tmpdir(), "sensecs-fig-"));
    for (const sweep of SWEEPS) {
      const csvPath = join(dir, sweep.file);
      writeFileSync(csvPath, fixture(sweep.file));
      const outPath = join(dir, sweep.file.replace(".csv", ".svg"));
      const code = renderMain(["render", "--csv", csvPath, "--x", sweep.x, "--out", outPath]);
      expect(code).toBe(0);
      const svg = readFileSync(outPath, "utf-8");
      expect(svg.startsWith("<svg ")).toBe(true);
      expect(countMatches(svg, /class="curve"/g)).toBe(SCHEMES.length);
    }
  });

  it("fails cleanly on raster output, bad flags, and missing files", () => {
    expect(renderMain(["render", "--csv", "x.csv", "--x", "snr_db", "--out", "fig.png"])).toBe(1);
    expect(renderMain(["render", "--csv", "/nonexistent.csv", "--x", "snr_db", "--out", "f.svg"])).toBe(1);
    expect(renderMain(["plot"])).toBe(1);
    expect(renderMain(["render", "--csv"])).toBe(1);
  });
});
