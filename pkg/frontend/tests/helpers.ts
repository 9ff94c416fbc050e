import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export function tempDir(): string {
  return mkdtempSync(join(tmpdir(), "plots-"));
}

export function writeCsv(dir: string, name: string, header: string[],
                         rows: number[][]): string {
  const path = join(dir, name);
  const text = [header.join(","),
    ...rows.map((r) => r.map(String).join(","))].join("\n") + "\n";
  writeFileSync(path, text);
  return path;
}

const SCALAR_HEADER = ["t", "energy", "tzeta_viscous", "tzeta_diffusive",
  "tzeta_reactive", "tzeta_phase", "tzeta_total", "total_mass",
  "total_charge", "boundary_work"];

/** scalars.csv with decaying energy and constant mechanisms */
export function scalarsFixture(dir: string, steps = 20): string {
  const rows: number[][] = [];
  for (let k = 0; k < steps; k++) {
    const t = 0.01 * k;
    const a = 2.0 * Math.exp(-0.8 * t);
    rows.push([t, a, 0.1, 0.2, 0.05, 0.15, 0.5, 3.0, 0.0, 0.0]);
  }
  return writeCsv(dir, "scalars.csv", SCALAR_HEADER, rows);
}

/** paired snapshot files: tanh interface translating between the two */
export function snapshotFixtures(dir: string): string[] {
  const header = ["x", "rho_1", "rho_2", "v", "chi", "phi", "nF"];
  const paths: string[] = [];
  for (const [k, shift] of [0.5, 0.6].entries()) {
    const rows: number[][] = [];
    for (let i = 0; i < 40; i++) {
      const x = (i + 0.5) / 40;
      const chi = Math.tanh((x - shift) / 0.05);
      rows.push([x, 0.4 + 0.1 * chi, 1.2 - 0.2 * chi, 0.01 * chi, chi,
        0.0, 0.0]);
    }
    paths.push(writeCsv(dir, `snapshots_000${k}.csv`, header, rows));
  }
  return paths;
}

/** jump_residuals.csv built from exact power laws r = c * delta^p */
export function residualFixture(dir: string,
                                laws: Record<string, [number, number]>,
                                deltas = [0.1, 0.05, 0.025]): string {
  const conds = Object.keys(laws);
  const header = ["delta", ...conds.map((c) => `res_${c}`),
    ...conds.map((c) => `order_${c}`), "j0", "j0_converged"];
  const res = conds.map((c) => {
    const [amp, p] = laws[c]!;
    return deltas.map((d) => amp * d ** p);
  });
  const rows = deltas.map((d, i) => {
    const row: (number | string)[] = [d];
    conds.forEach((_, j) => row.push(res[j]![i]!));
    conds.forEach((_, j) => row.push(i === 0 ? "nan"
      : Math.log(res[j]![i - 1]! / res[j]![i]!)
        / Math.log(deltas[i - 1]! / d)));
    row.push(0.0, "true");
    return row;
  });
  const path = join(dir, "jump_residuals.csv");
  writeFileSync(path, [header.join(","),
    ...rows.map((r) => r.join(","))].join("\n") + "\n");
  return path;
}
