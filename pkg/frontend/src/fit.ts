/** Least-squares line fits used for convergence-order annotations. */

export interface SlopeFit {
  slope: number;
  intercept: number;
  points: number;
}

/** Ordinary least squares y = a + b x over finite pairs. */
export function fitLine(x: number[], y: number[]): SlopeFit {
  const xs: number[] = [];
  const ys: number[] = [];
  for (let i = 0; i < Math.min(x.length, y.length); i++) {
    const xi = x[i]!;
    const yi = y[i]!;
    if (Number.isFinite(xi) && Number.isFinite(yi)) {
      xs.push(xi);
      ys.push(yi);
    }
  }
  const n = xs.length;
  if (n < 2) {
    return { slope: NaN, intercept: NaN, points: n };
  }
  const mx = xs.reduce((a, b) => a + b, 0) / n;
  const my = ys.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < n; i++) {
    sxx += (xs[i]! - mx) ** 2;
    sxy += (xs[i]! - mx) * (ys[i]! - my);
  }
  if (sxx === 0) {
    return { slope: NaN, intercept: NaN, points: n };
  }
  const slope = sxy / sxx;
  return { slope, intercept: my - slope * mx, points: n };
}

/** Slope of log(y) against log(x); nonpositive values are dropped. */
export function fitLogLogSlope(x: number[], y: number[]): SlopeFit {
  const lx: number[] = [];
  const ly: number[] = [];
  for (let i = 0; i < Math.min(x.length, y.length); i++) {
    if (x[i]! > 0 && y[i]! > 0) {
      lx.push(Math.log(x[i]!));
      ly.push(Math.log(y[i]!));
    }
  }
  return fitLine(lx, ly);
}

export function mean(values: number[]): number {
  const v = values.filter(Number.isFinite);
  if (v.length === 0) return NaN;
  return v.reduce((a, b) => a + b, 0) / v.length;
}
