/** Minimal SVG line charts emitted as text.
 *
 * No DOM, no canvas: every figure is a deterministic string, so the same
 * inputs always produce byte-identical files.
 */

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color: string;
  markers?: boolean;
}

export interface Panel {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  logX?: boolean;
  logY?: boolean;
  /** extra text lines drawn inside the axes, top left */
  annotations?: string[];
}

const PANEL_W = 760;
const PANEL_H = 420;
const MARGIN = { left: 78, right: 24, top: 40, bottom: 52 };

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1).replace("e", "e");
  return String(parseFloat(v.toPrecision(6)));
}

function niceStep(rough: number): number {
  const mag = 10 ** Math.floor(Math.log10(rough));
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= rough) return m * mag;
  }
  return 10 * mag;
}

function linearTicks(lo: number, hi: number): number[] {
  const step = niceStep((hi - lo) / 5);
  const ticks: number[] = [];
  let v = Math.ceil(lo / step) * step;
  // bounded count also guards against v += step stalling at the ULP
  while (v <= hi + 1e-12 * step && ticks.length < 12) {
    ticks.push(Math.abs(v) < 1e-12 * step ? 0 : v);
    const next = v + step;
    if (next === v) break;
    v = next;
  }
  return ticks;
}

/** ticks at 1-2-5 mantissas; falls back to the decades alone when dense */
function logTicks(lo: number, hi: number): { t: number; label: string }[] {
  const all: { t: number; label: string }[] = [];
  for (let d = Math.floor(lo) - 1; d <= Math.ceil(hi); d++) {
    for (const m of [1, 2, 5]) {
      const t = d + Math.log10(m);
      if (t >= lo - 1e-9 && t <= hi + 1e-9) {
        all.push({ t, label: fmtTick(m * 10 ** d) });
      }
    }
  }
  const decades = all.filter((x) => Number.isInteger(Math.round(x.t)) &&
    Math.abs(x.t - Math.round(x.t)) < 1e-9);
  if (decades.length >= 3) return decades;
  if (all.length >= 2) return all;
  return [{ t: lo, label: fmtTick(10 ** lo) },
          { t: hi, label: fmtTick(10 ** hi) }];
}

interface Axis {
  scale: (v: number) => number;
  ticks: { pos: number; label: string }[];
}

function buildAxis(values: number[], log: boolean, pixLo: number,
                   pixHi: number): Axis {
  let vals = values.filter(Number.isFinite);
  if (log) vals = vals.filter((v) => v > 0).map(Math.log10);
  let lo = vals.length ? Math.min(...vals) : 0;
  let hi = vals.length ? Math.max(...vals) : 1;
  const mag = Math.max(Math.abs(lo), Math.abs(hi), 1e-12);
  if (hi - lo <= mag * 1e-9) {
    // constant up to roundoff: pad relative to the magnitude, or the
    // tick step would stall below the ULP of the values
    const pad = mag * 0.05;
    lo -= pad;
    hi += pad;
  } else {
    const pad = (hi - lo) * 0.05;
    lo -= pad;
    hi += pad;
  }
  const scale = (v: number) => {
    const t = log ? Math.log10(v) : v;
    return pixLo + ((t - lo) / (hi - lo)) * (pixHi - pixLo);
  };
  const place = (t: number) => pixLo + ((t - lo) / (hi - lo)) * (pixHi - pixLo);
  const ticks = log
    ? logTicks(lo, hi).map((x) => ({ pos: place(x.t), label: x.label }))
    : linearTicks(lo, hi).map((t) => ({ pos: place(t), label: fmtTick(t) }));
  return { scale, ticks };
}

function px(v: number): string {
  return v.toFixed(2);
}

function panelSvg(p: Panel, yOff: number): string {
  const x0 = MARGIN.left;
  const x1 = PANEL_W - MARGIN.right;
  const y0 = yOff + PANEL_H - MARGIN.bottom;
  const y1 = yOff + MARGIN.top;
  const xs = buildAxis(p.series.flatMap((s) => s.x), !!p.logX, x0, x1);
  const ys = buildAxis(p.series.flatMap((s) => s.y), !!p.logY, y0, y1);
  const out: string[] = [];
  out.push(`<text x="${px((x0 + x1) / 2)}" y="${px(y1 - 14)}" ` +
    `text-anchor="middle" font-size="15" font-weight="bold">` +
    `${esc(p.title)}</text>`);
  for (const t of xs.ticks) {
    out.push(`<line x1="${px(t.pos)}" y1="${px(y0)}" x2="${px(t.pos)}" ` +
      `y2="${px(y1)}" stroke="#ddd"/>`);
    out.push(`<text x="${px(t.pos)}" y="${px(y0 + 18)}" ` +
      `text-anchor="middle" font-size="11">${esc(t.label)}</text>`);
  }
  for (const t of ys.ticks) {
    out.push(`<line x1="${px(x0)}" y1="${px(t.pos)}" x2="${px(x1)}" ` +
      `y2="${px(t.pos)}" stroke="#ddd"/>`);
    out.push(`<text x="${px(x0 - 6)}" y="${px(t.pos + 4)}" ` +
      `text-anchor="end" font-size="11">${esc(t.label)}</text>`);
  }
  out.push(`<rect x="${px(x0)}" y="${px(y1)}" width="${px(x1 - x0)}" ` +
    `height="${px(y0 - y1)}" fill="none" stroke="black"/>`);
  out.push(`<text x="${px((x0 + x1) / 2)}" y="${px(y0 + 38)}" ` +
    `text-anchor="middle" font-size="13">${esc(p.xLabel)}</text>`);
  out.push(`<text x="${px(x0 - 58)}" y="${px((y0 + y1) / 2)}" ` +
    `text-anchor="middle" font-size="13" transform="rotate(-90 ` +
    `${px(x0 - 58)} ${px((y0 + y1) / 2)})">${esc(p.yLabel)}</text>`);
  for (const s of p.series) {
    let run: string[] = [];
    const flush = () => {
      if (run.length > 1) {
        out.push(`<polyline fill="none" stroke="${s.color}" ` +
          `stroke-width="1.5" points="${run.join(" ")}"/>`);
      }
      run = [];
    };
    for (let i = 0; i < s.x.length; i++) {
      const vx = s.x[i]!;
      const vy = s.y[i]!;
      const usable = Number.isFinite(vx) && Number.isFinite(vy) &&
        (!p.logX || vx > 0) && (!p.logY || vy > 0);
      if (!usable) {
        flush();
        continue;
      }
      const cx = xs.scale(vx);
      const cy = ys.scale(vy);
      run.push(`${px(cx)},${px(cy)}`);
      if (s.markers) {
        out.push(`<circle cx="${px(cx)}" cy="${px(cy)}" r="3" ` +
          `fill="${s.color}"/>`);
      }
    }
    flush();
  }
  p.series.forEach((s, i) => {
    const ly = y1 + 14 + 16 * i;
    out.push(`<line x1="${px(x1 - 150)}" y1="${px(ly - 4)}" ` +
      `x2="${px(x1 - 126)}" y2="${px(ly - 4)}" stroke="${s.color}" ` +
      `stroke-width="2"/>`);
    out.push(`<text x="${px(x1 - 120)}" y="${px(ly)}" font-size="11">` +
      `${esc(s.label)}</text>`);
  });
  (p.annotations ?? []).forEach((line, i) => {
    out.push(`<text x="${px(x0 + 10)}" y="${px(y1 + 16 + 15 * i)}" ` +
      `font-size="12" font-family="monospace">${esc(line)}</text>`);
  });
  return out.join("\n");
}

export function renderFigure(panels: Panel[]): string {
  const height = PANEL_H * panels.length;
  const body = panels.map((p, i) => panelSvg(p, i * PANEL_H)).join("\n");
  return `<svg xmlns="http://www.w3.org/2000/svg" width="${PANEL_W}" ` +
    `height="${height}" viewBox="0 0 ${PANEL_W} ${height}" ` +
    `font-family="sans-serif">\n` +
    `<rect width="${PANEL_W}" height="${height}" fill="white"/>\n` +
    `${body}\n</svg>\n`;
}

/** Blue-to-red ramp for time-ordered curve families. */
export function rampColor(i: number, n: number): string {
  const t = n <= 1 ? 0 : i / (n - 1);
  const mix = (a: number, b: number) => Math.round(a + (b - a) * t);
  return `rgb(${mix(37, 215)},${mix(52, 48)},${mix(148, 31)})`;
}

export const PALETTE = [
  "#1b6ca8", "#d1495b", "#66a182", "#edae49", "#775da6",
  "#30638e", "#c35c33", "#3c8d63", "#8d5a97", "#5b5b5b",
];
