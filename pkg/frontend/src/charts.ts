/**
 * Client-side SVG rendering of the service's chart-data payloads.
 *
 * Pure string builders (payload in, SVG markup out) so they render
 * identically in the browser and under test. All numbers drawn come
 * straight from the payload; nothing is recomputed here.
 */

import type {
  ForecastPayload,
  FrequencyPayload,
  HistogramPayload,
  SeriesPlotPayload,
  XYPayload,
} from "./api.js";

export const WIDTH = 640;
export const HEIGHT = 360;
const MARGIN = { left: 52, right: 16, top: 16, bottom: 36 };

const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmt(v: number): string {
  const s = v.toPrecision(6);
  return String(Number(s));
}

interface Scale {
  lo: number;
  hi: number;
}

function padded(values: number[]): Scale {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const pad = (hi - lo) * 0.05;
  return { lo: lo - pad, hi: hi + pad };
}

function px(x: number, s: Scale): number {
  return MARGIN.left + ((x - s.lo) / (s.hi - s.lo)) * PLOT_W;
}

function py(y: number, s: Scale): number {
  return MARGIN.top + PLOT_H - ((y - s.lo) / (s.hi - s.lo)) * PLOT_H;
}

function ticks(s: Scale, n = 5): number[] {
  const span = s.hi - s.lo;
  const raw = span / n;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((v) => v >= raw)!;
  const out: number[] = [];
  for (let t = Math.ceil(s.lo / step) * step; t <= s.hi + 1e-12; t += step) {
    out.push(Number(t.toPrecision(12)));
  }
  return out;
}

function open(parts: string[]): void {
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}" ` +
      `width="${WIDTH}" height="${HEIGHT}" role="img">`,
  );
  parts.push(
    `<rect x="0" y="0" width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
  );
}

function axes(parts: string[], xs: Scale, ys: Scale): void {
  const x0 = MARGIN.left;
  const y0 = MARGIN.top + PLOT_H;
  parts.push(
    `<line x1="${x0}" y1="${y0}" x2="${x0 + PLOT_W}" y2="${y0}" stroke="#333"/>`,
    `<line x1="${x0}" y1="${MARGIN.top}" x2="${x0}" y2="${y0}" stroke="#333"/>`,
  );
  for (const t of ticks(ys)) {
    const y = py(t, ys);
    parts.push(
      `<line x1="${x0 - 4}" y1="${fmt(y)}" x2="${x0}" y2="${fmt(y)}" stroke="#333"/>`,
      `<text x="${x0 - 7}" y="${fmt(y + 4)}" text-anchor="end" font-size="11">${fmt(t)}</text>`,
    );
  }
  for (const t of ticks(xs)) {
    const x = px(t, xs);
    parts.push(
      `<line x1="${fmt(x)}" y1="${y0}" x2="${fmt(x)}" y2="${y0 + 4}" stroke="#333"/>`,
      `<text x="${fmt(x)}" y="${y0 + 18}" text-anchor="middle" font-size="11">${fmt(t)}</text>`,
    );
  }
}

export function renderHistogram(data: HistogramPayload): string {
  const parts: string[] = [];
  open(parts);
  const xs: Scale = { lo: data.edges[0], hi: data.edges[data.edges.length - 1] };
  const ys: Scale = { lo: 0, hi: Math.max(1, ...data.counts) * 1.05 };
  axes(parts, xs, ys);
  data.counts.forEach((count, i) => {
    const x = px(data.edges[i], xs);
    const w = px(data.edges[i + 1], xs) - x;
    const y = py(count, ys);
    parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" ` +
        `height="${fmt(py(0, ys) - y)}" fill="#4878a8" stroke="white"/>`,
    );
  });
  parts.push("</svg>");
  return parts.join("\n");
}

export function renderBar(data: FrequencyPayload): string {
  const parts: string[] = [];
  open(parts);
  const counts = data.entries.map((e) => e.count);
  const ys: Scale = { lo: 0, hi: Math.max(1, ...counts) * 1.05 };
  const n = Math.max(1, data.entries.length);
  const band = PLOT_W / n;
  const y0 = MARGIN.top + PLOT_H;
  parts.push(
    `<line x1="${MARGIN.left}" y1="${y0}" x2="${MARGIN.left + PLOT_W}" y2="${y0}" stroke="#333"/>`,
  );
  data.entries.forEach((entry, i) => {
    const x = MARGIN.left + i * band + band * 0.1;
    const y = py(entry.count, ys);
    parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(band * 0.8)}" ` +
        `height="${fmt(y0 - y)}" fill="#4878a8"/>`,
      `<text x="${fmt(x + band * 0.4)}" y="${y0 + 16}" text-anchor="middle" ` +
        `font-size="11">${esc(entry.level)}</text>`,
      `<text x="${fmt(x + band * 0.4)}" y="${fmt(y - 4)}" text-anchor="middle" ` +
        `font-size="11">${entry.count}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("\n");
}

export function renderXY(data: XYPayload): string {
  const parts: string[] = [];
  open(parts);
  const numeric = data.points.map(([x, y], i) => ({
    x: typeof x === "number" ? x : i,
    y,
  }));
  const xs = padded(numeric.map((p) => p.x));
  const ys = padded(numeric.map((p) => p.y));
  axes(parts, xs, ys);
  if (data.kind === "line") {
    const path = numeric
      .map((p, i) => `${i ? "L" : "M"}${fmt(px(p.x, xs))} ${fmt(py(p.y, ys))}`)
      .join(" ");
    parts.push(`<path d="${path}" fill="none" stroke="#a84848" stroke-width="1.5"/>`);
  }
  for (const p of numeric) {
    parts.push(
      `<circle cx="${fmt(px(p.x, xs))}" cy="${fmt(py(p.y, ys))}" r="2.5" fill="#4878a8"/>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}

/** Time-series line plot; draws the dashed reference line when present. */
export function renderSeriesPlot(data: SeriesPlotPayload): string {
  const parts: string[] = [];
  open(parts);
  const xs: Scale = { lo: 0, hi: Math.max(1, data.values.length - 1) };
  const yVals = [...data.values];
  if (data.reference_line !== null) yVals.push(data.reference_line);
  const ys = padded(yVals);
  axes(parts, xs, ys);
  const path = data.values
    .map((v, i) => `${i ? "L" : "M"}${fmt(px(i, xs))} ${fmt(py(v, ys))}`)
    .join(" ");
  parts.push(`<path d="${path}" fill="none" stroke="#4878a8" stroke-width="1.5"/>`);
  if (data.reference_line !== null) {
    const y = fmt(py(data.reference_line, ys));
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + PLOT_W}" ` +
        `y2="${y}" stroke="#a84848" stroke-dasharray="6 4" ` +
        `data-role="reference-line" data-value="${data.reference_line}"/>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}

/**
 * Forecast fan: observed tail, point path, and nested shaded bands.
 * Band polygons carry data-level attributes so tests (and tooltips) can
 * trace each one back to its interval level.
 */
export function renderForecastFan(
  history: number[],
  forecastData: ForecastPayload,
): string {
  const parts: string[] = [];
  open(parts);
  const tail = history.slice(-Math.max(20, forecastData.horizon * 2));
  const n = tail.length;
  const h = forecastData.horizon;
  const xs: Scale = { lo: 0, hi: Math.max(1, n + h - 1) };
  const levels = Object.keys(forecastData.intervals).sort();
  const all = [
    ...tail,
    ...forecastData.point,
    ...levels.flatMap((l) => [
      ...forecastData.intervals[l].lower,
      ...forecastData.intervals[l].upper,
    ]),
  ];
  const ys = padded(all);
  axes(parts, xs, ys);

  // widest band first so narrower ones draw on top
  for (const level of [...levels].reverse()) {
    const band = forecastData.intervals[level];
    const upper = band.upper.map(
      (v, i) => `${fmt(px(n + i, xs))},${fmt(py(v, ys))}`,
    );
    const lower = band.lower
      .map((v, i) => `${fmt(px(n + i, xs))},${fmt(py(v, ys))}`)
      .reverse();
    parts.push(
      `<polygon points="${[...upper, ...lower].join(" ")}" ` +
        `fill="#4878a8" fill-opacity="0.18" data-level="${level}"/>`,
    );
  }

  const histPath = tail
    .map((v, i) => `${i ? "L" : "M"}${fmt(px(i, xs))} ${fmt(py(v, ys))}`)
    .join(" ");
  parts.push(`<path d="${histPath}" fill="none" stroke="#333" stroke-width="1.5"/>`);

  const fcPath = forecastData.point
    .map((v, i) => `${i ? "L" : "M"}${fmt(px(n + i, xs))} ${fmt(py(v, ys))}`)
    .join(" ");
  parts.push(
    `<path d="${fcPath}" fill="none" stroke="#a84848" stroke-width="1.5" ` +
      `data-role="forecast-path"/>`,
  );
  parts.push("</svg>");
  return parts.join("\n");
}

/** Ljung-Box panel: Q bars with p-values printed above each lag. */
export function renderLjungBox(data: {
  lags: number[];
  q: number[];
  p: (number | null)[];
}): string {
  const parts: string[] = [];
  open(parts);
  const ys: Scale = { lo: 0, hi: Math.max(1, ...data.q) * 1.1 };
  const n = Math.max(1, data.lags.length);
  const band = PLOT_W / n;
  const y0 = MARGIN.top + PLOT_H;
  data.lags.forEach((lag, i) => {
    const x = MARGIN.left + i * band + band * 0.15;
    const y = py(data.q[i], ys);
    const p = data.p[i];
    parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(band * 0.7)}" ` +
        `height="${fmt(y0 - y)}" fill="#4878a8" data-lag="${lag}" ` +
        `data-q="${data.q[i]}"/>`,
      `<text x="${fmt(x + band * 0.35)}" y="${fmt(y - 4)}" ` +
        `text-anchor="middle" font-size="10">` +
        `${p === null ? "—" : "p=" + p.toFixed(3)}</text>`,
      `<text x="${fmt(x + band * 0.35)}" y="${y0 + 14}" ` +
        `text-anchor="middle" font-size="10">${lag}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("\n");
}
