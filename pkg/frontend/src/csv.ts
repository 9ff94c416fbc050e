/** Readers for the solver's CSV artifacts.
 *
 * Columns are documented contracts: snapshots carry x, rho_1..rho_N, v,
 * chi, phi, nF; scalars carry the per-step energy ledger; jump_residuals
 * carries one row per interface width with residuals and pairwise orders.
 * Files are never modified, only read.
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export class CsvError extends Error {}

export interface Table {
  path: string;
  columns: string[];
  /** column name -> numeric values; non-numeric cells become NaN */
  data: Map<string, number[]>;
  rows: number;
}

export function readTable(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "ascii");
  } catch {
    throw new CsvError(`cannot read ${path}`);
  }
  const parsed = Papa.parse<string[]>(text.trim(), { delimiter: "," });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new CsvError(`${path}: ${first ? first.message : "parse error"}`);
  }
  const grid = parsed.data.filter((r) => r.length > 1 || (r[0] ?? "") !== "");
  if (grid.length < 2) {
    throw new CsvError(`${path}: no data rows`);
  }
  const columns = grid[0] as string[];
  const data = new Map<string, number[]>(columns.map((c) => [c, []]));
  for (const row of grid.slice(1)) {
    if (row.length !== columns.length) {
      throw new CsvError(`${path}: ragged row with ${row.length} fields`);
    }
    columns.forEach((c, i) => data.get(c)!.push(Number(row[i])));
  }
  return { path, columns, data, rows: grid.length - 1 };
}

function requireColumns(t: Table, names: string[]): void {
  for (const name of names) {
    if (!t.columns.includes(name)) {
      throw new CsvError(`${t.path}: missing column ${name}`);
    }
  }
}

function matching(t: Table, re: RegExp): string[] {
  return t.columns.filter((c) => re.test(c));
}

export interface Snapshot {
  table: Table;
  x: number[];
  /** everything except the coordinate, in header order */
  fields: string[];
}

export function readSnapshot(path: string): Snapshot {
  const table = readTable(path);
  requireColumns(table, ["x", "v", "chi", "phi", "nF"]);
  if (matching(table, /^rho_\d+$/).length === 0) {
    throw new CsvError(`${path}: missing column rho_1`);
  }
  return {
    table,
    x: table.data.get("x")!,
    fields: table.columns.filter((c) => c !== "x"),
  };
}

export const SCALAR_MECHANISMS = [
  "tzeta_viscous",
  "tzeta_diffusive",
  "tzeta_reactive",
  "tzeta_phase",
  "tzeta_total",
];

export function readScalars(path: string): Table {
  const table = readTable(path);
  requireColumns(table, ["t", "energy", ...SCALAR_MECHANISMS]);
  return table;
}

export interface ResidualStudy {
  table: Table;
  delta: number[];
  /** condition tag -> residual norms, one per delta row */
  residuals: Map<string, number[]>;
  /** condition tag -> pairwise orders; NaN where undefined (first row) */
  orders: Map<string, number[]>;
}

export function readResidualStudy(path: string): ResidualStudy {
  const table = readTable(path);
  requireColumns(table, ["delta"]);
  const residuals = new Map<string, number[]>();
  const orders = new Map<string, number[]>();
  for (const col of matching(table, /^res_/)) {
    residuals.set(col.slice(4), table.data.get(col)!);
  }
  for (const col of matching(table, /^order_/)) {
    orders.set(col.slice(6), table.data.get(col)!);
  }
  if (residuals.size === 0) {
    throw new CsvError(`${path}: no res_* columns`);
  }
  return { table, delta: table.data.get("delta")!, residuals, orders };
}
