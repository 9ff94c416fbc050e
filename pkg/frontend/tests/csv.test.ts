import { writeFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import {
  CsvError,
  readResidualStudy,
  readScalars,
  readSnapshot,
  readTable,
} from "../src/csv.js";
import {
  residualFixture,
  scalarsFixture,
  snapshotFixtures,
  tempDir,
  writeCsv,
} from "./helpers.js";

describe("readTable", () => {
  it("parses numeric columns", () => {
    const dir = tempDir();
    const path = writeCsv(dir, "t.csv", ["a", "b"], [[1, 2], [3.5, -4]]);
    const t = readTable(path);
    expect(t.columns).toEqual(["a", "b"]);
    expect(t.data.get("b")).toEqual([2, -4]);
    expect(t.rows).toBe(2);
  });

  it("names the file when it is missing", () => {
    expect(() => readTable("/nonexistent/x.csv"))
      .toThrow(/\/nonexistent\/x\.csv/);
  });

  it("rejects empty and header-only files", () => {
    const dir = tempDir();
    const empty = join(dir, "empty.csv");
    writeFileSync(empty, "");
    expect(() => readTable(empty)).toThrow(CsvError);
    const headerOnly = join(dir, "h.csv");
    writeFileSync(headerOnly, "a,b\n");
    expect(() => readTable(headerOnly)).toThrow(/no data rows/);
  });

  it("rejects ragged rows", () => {
    const dir = tempDir();
    const path = join(dir, "r.csv");
    writeFileSync(path, "a,b\n1,2\n3\n");
    expect(() => readTable(path)).toThrow(/ragged/);
  });
});

describe("schema readers", () => {
  it("accepts the solver's scalars layout", () => {
    const t = readScalars(scalarsFixture(tempDir()));
    const energy = t.data.get("energy")!;
    expect(energy[0]).toBeGreaterThan(energy.at(-1)!);
  });

  it("rejects scalars without an energy column", () => {
    const dir = tempDir();
    const path = writeCsv(dir, "scalars.csv", ["t", "tzeta_viscous",
      "tzeta_diffusive", "tzeta_reactive", "tzeta_phase", "tzeta_total"],
      [[0, 1, 1, 1, 1, 4]]);
    expect(() => readScalars(path)).toThrow(/missing column energy/);
  });

  it("reads snapshots and lists the plottable fields", () => {
    const [path] = snapshotFixtures(tempDir());
    const snap = readSnapshot(path!);
    expect(snap.fields).toEqual(["rho_1", "rho_2", "v", "chi", "phi", "nF"]);
    expect(snap.x.length).toBe(40);
  });

  it("requires at least one density column", () => {
    const dir = tempDir();
    const path = writeCsv(dir, "s.csv", ["x", "v", "chi", "phi", "nF"],
      [[0, 0, 0, 0, 0]]);
    expect(() => readSnapshot(path)).toThrow(/rho_1/);
  });

  it("pairs residual and order columns by condition", () => {
    const path = residualFixture(tempDir(), { i1: [0.8, 1.05] });
    const study = readResidualStudy(path);
    expect([...study.residuals.keys()]).toEqual(["i1"]);
    expect(study.delta).toEqual([0.1, 0.05, 0.025]);
    const orders = study.orders.get("i1")!;
    expect(orders[0]).toBeNaN();
    expect(orders[1]).toBeCloseTo(1.05, 10);
  });

  it("rejects a study without residual columns", () => {
    const dir = tempDir();
    const path = writeCsv(dir, "j.csv", ["delta", "j0"], [[0.1, 0]]);
    expect(() => readResidualStudy(path)).toThrow(/no res_/);
  });
});
