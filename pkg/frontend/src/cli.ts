#!/usr/bin/env node
/** CLI: plots profiles|energy|convergence <path> [--out dir]
 *
 * `profiles` takes a directory or a glob with `*` in the file name and
 * renders one figure per field; `energy` takes scalars.csv; `convergence`
 * takes jump_residuals.csv and prints the fitted slope per condition.
 */

import { mkdirSync, readdirSync, statSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { pathToFileURL } from "node:url";
import { CsvError } from "./csv.js";
import {
  convergenceFigure,
  energyFigure,
  Figure,
  profileFigures,
} from "./figures.js";

const USAGE = "usage: plots profiles|energy|convergence <path> [--out dir]";

export function expandSnapshots(pattern: string): string[] {
  let dir = pattern;
  let name = "snapshots_*.csv";
  try {
    if (!statSync(pattern).isDirectory()) {
      return [pattern];
    }
  } catch {
    dir = dirname(pattern);
    name = pattern.slice(dir.length).replace(/^[/\\]/, "");
  }
  const re = new RegExp(
    "^" + name.split("*").map((part) =>
      part.replace(/[.+?^${}()|[\]\\]/g, "\\$&")).join(".*") + "$",
  );
  let entries: string[];
  try {
    entries = readdirSync(dir);
  } catch {
    throw new CsvError(`no snapshot files match ${pattern}`);
  }
  const hits = entries.filter((e) => re.test(e)).sort()
    .map((e) => join(dir, e));
  if (hits.length === 0) {
    throw new CsvError(`no snapshot files match ${pattern}`);
  }
  return hits;
}

function emit(outDir: string, figures: Figure[]): void {
  mkdirSync(outDir, { recursive: true });
  for (const fig of figures) {
    const path = join(outDir, fig.filename);
    writeFileSync(path, fig.svg, "ascii");
    console.log(path);
  }
}

export function main(argv: string[]): number {
  const rest: string[] = [];
  let outDir = ".";
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--out") {
      const v = argv[i + 1];
      if (v === undefined) {
        console.error(USAGE);
        return 2;
      }
      outDir = v;
      i++;
    } else {
      rest.push(argv[i]!);
    }
  }
  const [cmd, path] = rest;
  if (rest.length !== 2 || cmd === undefined || path === undefined) {
    console.error(USAGE);
    return 2;
  }
  try {
    if (cmd === "profiles") {
      emit(outDir, profileFigures(expandSnapshots(path)));
    } else if (cmd === "energy") {
      emit(outDir, [energyFigure(path)]);
    } else if (cmd === "convergence") {
      const { figure, fits } = convergenceFigure(path);
      emit(outDir, [figure]);
      for (const f of fits) {
        console.log(`${f.condition}: slope ${f.fitted.toFixed(4)} ` +
          `reported ${f.reported.toFixed(4)}`);
      }
    } else {
      console.error(USAGE);
      return 2;
    }
  } catch (err) {
    if (err instanceof CsvError) {
      console.error(`plots: ${err.message}`);
      return 1;
    }
    throw err;
  }
  return 0;
}

const direct = process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;
if (direct) {
  process.exit(main(process.argv.slice(2)));
}
