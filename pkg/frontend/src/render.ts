/**
 * CLI: render a sweep CSV into an SVG figure.
 *
 *   node dist/render.js render --csv sweep.csv --x snr_db --out figure.svg [--title "..."]
 *
 * Only SVG output is supported; requesting another extension is an error.
 * Exit codes: 0 success, 1 usage/data error.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { CsvError, parseSweepCsv } from "./csv.js";
import { buildFigureSvg } from "./figure.js";

interface Args {
  csv: string;
  x: string;
  out: string;
  title?: string;
}

function parseArgs(argv: string[]): Args {
  if (argv.length === 0 || argv[0] !== "render") {
    throw new CsvError("usage: render --csv <path> --x <column> --out <path.svg> [--title <text>]");
  }
  const flags = new Map<string, string>();
  for (let i = 1; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key.startsWith("--") || value === undefined) {
      throw new CsvError(`malformed argument near '${key}'`);
    }
    flags.set(key.slice(2), value);
  }
  const csv = flags.get("csv");
  const x = flags.get("x");
  const out = flags.get("out");
  if (!csv || !x || !out) {
    throw new CsvError("render requires --csv, --x and --out");
  }
  if (!out.toLowerCase().endsWith(".svg")) {
    throw new CsvError(`output must be an .svg path (got '${out}'); raster formats are not supported`);
  }
  return { csv, x, out, title: flags.get("title") };
}

export function renderFile(args: Args): void {
  let text: string;
  try {
    text = readFileSync(args.csv, "utf-8");
  } catch (err) {
    throw new CsvError(`cannot read CSV '${args.csv}': ${(err as Error).message}`);
  }
  const rows = parseSweepCsv(text);
  const svg = buildFigureSvg(rows, { xColumn: args.x, title: args.title });
  writeFileSync(args.out, svg, "utf-8");
}

export function main(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    renderFile(args);
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof CsvError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

const isDirectRun = process.argv[1]?.endsWith("render.js") ?? false;
if (isDirectRun) {
  process.exit(main(process.argv.slice(2)));
}
