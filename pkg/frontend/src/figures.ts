/** The three figure builders: field profiles, energy ledger, convergence. */

import { basename } from "node:path";
import {
  CsvError,
  readResidualStudy,
  readScalars,
  readSnapshot,
  SCALAR_MECHANISMS,
} from "./csv.js";
import { fitLogLogSlope, mean } from "./fit.js";
import { PALETTE, Panel, rampColor, renderFigure, Series } from "./svg.js";

export interface Figure {
  filename: string;
  svg: string;
}

function snapshotLabel(path: string): string {
  return basename(path).replace(/\.csv$/, "").replace(/^snapshots_/, "");
}

/** One figure per field, curves ordered and colored by snapshot index. */
export function profileFigures(paths: string[]): Figure[] {
  if (paths.length === 0) {
    throw new CsvError("no snapshot files");
  }
  const snaps = [...paths].sort().map(readSnapshot);
  const fields = snaps[0]!.fields;
  for (const s of snaps.slice(1)) {
    if (s.fields.join() !== fields.join()) {
      throw new CsvError(`${s.table.path}: columns differ from ` +
        `${snaps[0]!.table.path}`);
    }
  }
  return fields.map((field) => {
    const series: Series[] = snaps.map((s, i) => ({
      label: snapshotLabel(s.table.path),
      x: s.x,
      y: s.table.data.get(field)!,
      color: rampColor(i, snaps.length),
    }));
    const panel: Panel = {
      title: `${field} profiles`,
      xLabel: "x",
      yLabel: field,
      series,
    };
    return { filename: `profiles_${field}.svg`, svg: renderFigure([panel]) };
  });
}

/** Free energy on top, the entropy-production mechanisms below. */
export function energyFigure(path: string): Figure {
  const t = readScalars(path);
  const time = t.data.get("t")!;
  const energy: Panel = {
    title: "free energy",
    xLabel: "t",
    yLabel: "A(t)",
    series: [{ label: "energy", x: time, y: t.data.get("energy")!,
               color: PALETTE[0]! }],
  };
  const mechanisms: Panel = {
    title: "entropy production",
    xLabel: "t",
    yLabel: "T zeta",
    series: SCALAR_MECHANISMS.map((name, i) => ({
      label: name.replace(/^tzeta_/, ""),
      x: time,
      y: t.data.get(name)!,
      color: PALETTE[i % PALETTE.length]!,
    })),
  };
  return { filename: "energy.svg", svg: renderFigure([energy, mechanisms]) };
}

export interface ConditionFit {
  condition: string;
  /** least-squares slope of log(residual) vs log(delta) */
  fitted: number;
  /** mean of the study's finite pairwise orders */
  reported: number;
}

export interface ConvergenceResult {
  figure: Figure;
  fits: ConditionFit[];
}

function fmtSlope(v: number): string {
  return Number.isFinite(v) ? v.toFixed(3) : "n/a";
}

/** Log-log residuals against delta, one annotated slope per condition. */
export function convergenceFigure(path: string): ConvergenceResult {
  const study = readResidualStudy(path);
  const fits: ConditionFit[] = [];
  const series: Series[] = [];
  const conditions = [...study.residuals.keys()];
  conditions.forEach((cond, i) => {
    const res = study.residuals.get(cond)!;
    fits.push({
      condition: cond,
      fitted: fitLogLogSlope(study.delta, res).slope,
      reported: mean(study.orders.get(cond) ?? []),
    });
    series.push({
      label: cond,
      x: study.delta,
      y: res,
      color: PALETTE[i % PALETTE.length]!,
      markers: true,
    });
  });
  const panel: Panel = {
    title: "jump residuals vs interface width",
    xLabel: "delta",
    yLabel: "residual",
    series,
    logX: true,
    logY: true,
    annotations: fits.map((f) =>
      `${f.condition}: slope ${fmtSlope(f.fitted)} ` +
      `(reported ${fmtSlope(f.reported)})`),
  };
  return {
    figure: { filename: "convergence.svg", svg: renderFigure([panel]) },
    fits,
  };
}
