import { describe, expect, it } from "vitest";
import { fitLine, fitLogLogSlope, mean } from "../src/fit.js";

describe("fitLine", () => {
  it("recovers an exact line", () => {
    const x = [0, 1, 2, 3, 4];
    const y = x.map((v) => 1.5 * v - 0.25);
    const fit = fitLine(x, y);
    expect(fit.slope).toBeCloseTo(1.5, 12);
    expect(fit.intercept).toBeCloseTo(-0.25, 12);
    expect(fit.points).toBe(5);
  });

  it("ignores non-finite pairs", () => {
    const fit = fitLine([0, 1, NaN, 2], [0, 2, 5, 4]);
    expect(fit.slope).toBeCloseTo(2, 12);
    expect(fit.points).toBe(3);
  });

  it("needs two points and some spread", () => {
    expect(fitLine([1], [1]).slope).toBeNaN();
    expect(fitLine([2, 2, 2], [1, 2, 3]).slope).toBeNaN();
  });
});

describe("fitLogLogSlope", () => {
  it("recovers a power-law exponent exactly", () => {
    const deltas = [0.1, 0.05, 0.025];
    const res = deltas.map((d) => 0.8 * d ** 1.7);
    expect(fitLogLogSlope(deltas, res).slope).toBeCloseTo(1.7, 10);
  });

  it("drops nonpositive values instead of failing", () => {
    const fit = fitLogLogSlope([0.1, 0.05, 0.025], [1e-3, 0, 2.5e-4]);
    expect(fit.points).toBe(2);
    expect(fit.slope).toBeCloseTo(1, 10);
  });

  it("equals the mean pairwise order for log-spaced points", () => {
    // three widths at ratio 2: least squares slope == mean of the two
    // adjacent two-point orders
    const deltas = [0.1, 0.05, 0.025];
    const res = [3e-2, 1.2e-2, 5.5e-3];
    const o1 = Math.log(res[0]! / res[1]!) / Math.log(2);
    const o2 = Math.log(res[1]! / res[2]!) / Math.log(2);
    const fit = fitLogLogSlope(deltas, res);
    expect(fit.slope).toBeCloseTo((o1 + o2) / 2, 10);
  });
});

describe("mean", () => {
  it("averages the finite entries", () => {
    expect(mean([NaN, 1, 3])).toBeCloseTo(2, 12);
    expect(mean([NaN])).toBeNaN();
  });
});
