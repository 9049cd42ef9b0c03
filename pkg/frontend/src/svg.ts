/** Minimal SVG chart builder: log/linear axes, polylines, markers, reference lines. */

export interface Scale {
  toPx(v: number): number;
}

export function linearScale(d0: number, d1: number, p0: number, p1: number): Scale {
  const k = (p1 - p0) / (d1 - d0 || 1);
  return { toPx: (v) => p0 + (v - d0) * k };
}

export function logScale(d0: number, d1: number, p0: number, p1: number): Scale {
  const l0 = Math.log10(d0);
  const l1 = Math.log10(d1);
  const k = (p1 - p0) / (l1 - l0 || 1);
  return { toPx: (v) => p0 + (Math.log10(v) - l0) * k };
}

export function niceTicks(lo: number, hi: number, n = 5): number[] {
  const span = hi - lo || 1;
  const step = Math.pow(10, Math.floor(Math.log10(span / n)));
  const err = span / n / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = mult * step;
  const start = Math.ceil(lo / s) * s;
  const ticks: number[] = [];
  for (let v = start; v <= hi + 1e-12 * span; v += s) ticks.push(v);
  return ticks;
}

export function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.01 && a < 10000) {
    return String(Number(v.toPrecision(6)));
  }
  return v.toExponential(2);
}

export interface Series {
  label: string;
  color: string;
  points: Array<[number, number]>;
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  xLog?: boolean;
  yLog?: boolean;
  series: Series[];
  hline?: { value: number; label: string };
  annotations?: string[];
}

const W = 680;
const H = 440;
const M = { left: 78, right: 24, top: 44, bottom: 56 };

export function renderChart(spec: ChartSpec): string {
  const xs = spec.series.flatMap((s) => s.points.map((p) => p[0]));
  const ys = spec.series.flatMap((s) => s.points.map((p) => p[1]));
  if (spec.hline) ys.push(spec.hline.value);
  let x0 = Math.min(...xs);
  let x1 = Math.max(...xs);
  let y0 = Math.min(...ys);
  let y1 = Math.max(...ys);
  if (!spec.xLog) {
    const padX = 0.06 * (x1 - x0 || 1);
    x0 -= padX; x1 += padX;
  } else {
    x0 /= 1.15; x1 *= 1.15;
  }
  if (!spec.yLog) {
    const padY = 0.08 * (y1 - y0 || Math.abs(y1) || 1);
    y0 -= padY; y1 += padY;
  } else {
    y0 /= 1.3; y1 *= 1.3;
  }
  const sx = spec.xLog ? logScale(x0, x1, M.left, W - M.right) : linearScale(x0, x1, M.left, W - M.right);
  const sy = spec.yLog ? logScale(y0, y1, H - M.bottom, M.top) : linearScale(y0, y1, H - M.bottom, M.top);

  const el: string[] = [];
  el.push(`<rect width="${W}" height="${H}" fill="white"/>`);
  el.push(`<text x="${W / 2}" y="24" text-anchor="middle" font-size="15" font-family="sans-serif">${spec.title}</text>`);

  const xTicks = spec.xLog
    ? logTicks(x0, x1)
    : niceTicks(x0, x1);
  const yTicks = spec.yLog ? logTicks(y0, y1) : niceTicks(y0, y1);
  for (const t of xTicks) {
    const px = sx.toPx(t);
    el.push(`<line x1="${px}" y1="${H - M.bottom}" x2="${px}" y2="${M.top}" stroke="#eee"/>`);
    el.push(`<text x="${px}" y="${H - M.bottom + 18}" text-anchor="middle" font-size="11" font-family="sans-serif">${fmt(t)}</text>`);
  }
  for (const t of yTicks) {
    const py = sy.toPx(t);
    el.push(`<line x1="${M.left}" y1="${py}" x2="${W - M.right}" y2="${py}" stroke="#eee"/>`);
    el.push(`<text x="${M.left - 6}" y="${py + 4}" text-anchor="end" font-size="11" font-family="sans-serif">${fmt(t)}</text>`);
  }
  el.push(`<rect x="${M.left}" y="${M.top}" width="${W - M.left - M.right}" height="${H - M.top - M.bottom}" fill="none" stroke="#888"/>`);
  el.push(`<text x="${W / 2}" y="${H - 12}" text-anchor="middle" font-size="13" font-family="sans-serif">${spec.xLabel}</text>`);
  el.push(`<text x="20" y="${H / 2}" text-anchor="middle" font-size="13" font-family="sans-serif" transform="rotate(-90 20 ${H / 2})">${spec.yLabel}</text>`);

  if (spec.hline) {
    const py = sy.toPx(spec.hline.value);
    el.push(`<line x1="${M.left}" y1="${py}" x2="${W - M.right}" y2="${py}" stroke="#c22" stroke-dasharray="6 4"/>`);
    el.push(`<text x="${W - M.right - 4}" y="${py - 6}" text-anchor="end" font-size="12" fill="#c22" font-family="sans-serif">${spec.hline.label}</text>`);
  }

  spec.series.forEach((s, idx) => {
    const pts = s.points.map(([x, y]) => `${sx.toPx(x)},${sy.toPx(y)}`).join(" ");
    el.push(`<polyline points="${pts}" fill="none" stroke="${s.color}" stroke-width="2"/>`);
    for (const [x, y] of s.points) {
      el.push(`<circle cx="${sx.toPx(x)}" cy="${sy.toPx(y)}" r="4" fill="${s.color}"/>`);
    }
    el.push(`<text x="${M.left + 10}" y="${M.top + 18 + 16 * idx}" font-size="12" fill="${s.color}" font-family="sans-serif">${s.label}</text>`);
  });

  (spec.annotations ?? []).forEach((a, idx) => {
    el.push(`<text x="${W - M.right - 6}" y="${M.top + 18 + 16 * idx}" text-anchor="end" font-size="12" fill="#333" font-family="sans-serif">${a}</text>`);
  });

  return `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" viewBox="0 0 ${W} ${H}">\n${el.join("\n")}\n</svg>\n`;
}

function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  const e0 = Math.floor(Math.log10(lo));
  const e1 = Math.ceil(Math.log10(hi));
  for (let e = e0; e <= e1; e++) {
    for (const m of [1, 2, 5]) {
      const v = m * Math.pow(10, e);
      if (v >= lo && v <= hi) ticks.push(v);
    }
  }
  return ticks;
}
