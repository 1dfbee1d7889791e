/**
 * Parser for the simulator's sweep CSV schema:
 *   variable,value,scheme,mean_rate,stderr_rate,trials,seed
 * One row per (sweep value, scheme). Strict: a malformed or empty file is an
 * error, and missing columns are reported by name.
 */

export interface SweepRow {
  variable: string;
  value: number;
  scheme: string;
  meanRate: number;
  stderrRate: number;
  trials: number;
  seed: number;
}

export const REQUIRED_COLUMNS = [
  "variable",
  "value",
  "scheme",
  "mean_rate",
  "stderr_rate",
  "trials",
  "seed",
] as const;

export class CsvError extends Error {}

function parseNumber(raw: string, column: string, line: number): number {
  const value = Number(raw);
  if (raw.trim() === "" || Number.isNaN(value)) {
    throw new CsvError(`line ${line}: column '${column}' has non-numeric value '${raw}'`);
  }
  return value;
}

export function parseSweepCsv(text: string): SweepRow[] {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new CsvError("CSV is empty");
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const missing = REQUIRED_COLUMNS.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new CsvError(`CSV is missing required column(s): ${missing.join(", ")}`);
  }
  const index = Object.fromEntries(header.map((name, i) => [name, i]));
  if (lines.length === 1) {
    throw new CsvError("CSV has a header but no data rows");
  }

  const rows: SweepRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new CsvError(`line ${i + 1}: expected ${header.length} cells, got ${cells.length}`);
    }
    rows.push({
      variable: cells[index["variable"]],
      value: parseNumber(cells[index["value"]], "value", i + 1),
      scheme: cells[index["scheme"]],
      meanRate: parseNumber(cells[index["mean_rate"]], "mean_rate", i + 1),
      stderrRate: parseNumber(cells[index["stderr_rate"]], "stderr_rate", i + 1),
      trials: parseNumber(cells[index["trials"]], "trials", i + 1),
      seed: parseNumber(cells[index["seed"]], "seed", i + 1),
    });
  }
  return rows;
}

/** Group rows into one series per scheme, points sorted by x value. */
export function groupByScheme(rows: SweepRow[]): Map<string, SweepRow[]> {
  const series = new Map<string, SweepRow[]>();
  for (const row of rows) {
    const bucket = series.get(row.scheme);
    if (bucket) {
      bucket.push(row);
    } else {
      series.set(row.scheme, [row]);
    }
  }
  for (const bucket of series.values()) {
    bucket.sort((a, b) => a.value - b.value);
  }
  return series;
}
