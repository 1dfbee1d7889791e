export { CsvError, parseSweepCsv, groupByScheme, REQUIRED_COLUMNS } from "./csv.js";
export type { SweepRow } from "./csv.js";
export { buildFigureSvg, SCHEME_STYLES, X_AXIS_LABELS, Y_AXIS_LABEL } from "./figure.js";
export type { FigureSpec } from "./figure.js";
export { renderFile } from "./render.js";
