/**
 * Minimal deterministic SVG plotting core. Output depends only on the data
 * handed in: fixed palette, fixed tick rules, fixed number formatting, no
 * clocks. Coordinates are emitted at centipixel resolution.
 */

export const PALETTE = [
  "#1f6f8b",
  "#d1495b",
  "#66a182",
  "#8d5a97",
  "#e3b23c",
  "#3e4e50",
] as const;

const TEXT = "#222222";
const GRID = "#dddddd";
const AXIS = "#555555";

export interface Scale {
  (value: number): number;
  domain: [number, number];
  kind: "linear" | "log";
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const scale = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  scale.kind = "linear";
  return scale;
}

export function log10Scale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  if (d0 <= 0 || d1 <= 0) throw new RangeError("log scale needs a positive domain");
  const [r0, r1] = range;
  const l0 = Math.log10(d0);
  const span = Math.log10(d1) - l0 || 1;
  const scale = ((v: number) => r0 + ((Math.log10(v) - l0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  scale.kind = "log";
  return scale;
}

/** Round tick positions at 1/2/5 steps, at most `target` + 1 of them. */
export function niceTicks(lo: number, hi: number, target = 6): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / Math.max(target, 1);
  const base = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = base * 10;
  for (const m of [1, 2, 5]) {
    if (base * m >= rawStep) {
      step = base * m;
      break;
    }
  }
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

/** Powers of ten spanning [lo, hi]. */
export function decadeTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); e <= Math.log10(hi) + 1e-9; e++) {
    ticks.push(Math.pow(10, e));
  }
  return ticks;
}

export function fmtCoord(v: number): string {
  return v.toFixed(2);
}

export function fmtTick(v: number): string {
  if (v === 0) return "0";
  const mag = Math.abs(v);
  if (mag >= 1e4 || mag < 1e-3) {
    const e = Math.floor(Math.log10(mag) + 1e-12);
    const mant = v / Math.pow(10, e);
    const m = Math.abs(mant - 1) < 1e-9 ? "" : `${Number(mant.toPrecision(3))}x`;
    return `${m}1e${e}`;
  }
  return String(Number(v.toPrecision(4)));
}

function escapeText(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export interface Frame {
  width: number;
  height: number;
  left: number;
  right: number;
  top: number;
  bottom: number;
  x: Scale;
  y: Scale;
}

export interface FrameOptions {
  width?: number;
  height?: number;
  top?: number;
  bottom?: number;
  yKind?: "linear" | "log";
}

export function makeFrame(
  xDomain: [number, number],
  yDomain: [number, number],
  options: FrameOptions = {},
): Frame {
  const width = options.width ?? 640;
  const height = options.height ?? 420;
  const left = 70;
  const right = width - 18;
  const top = options.top ?? 38;
  const bottom = options.bottom ?? height - 48;
  const x = linearScale(xDomain, [left, right]);
  const y =
    options.yKind === "log"
      ? log10Scale(yDomain, [bottom, top])
      : linearScale(yDomain, [bottom, top]);
  return { width, height, left, right, top, bottom, x, y };
}

export interface AxisLabels {
  title?: string;
  xLabel: string;
  yLabel: string;
  xTicks?: number[];
  yTicks?: number[];
}

/** Grid, tick marks, tick labels, axis labels, and the plot border. */
export function axes(frame: Frame, labels: AxisLabels): string {
  const parts: string[] = [];
  const xTicks =
    labels.xTicks ??
    (frame.x.kind === "log"
      ? decadeTicks(frame.x.domain[0], frame.x.domain[1])
      : niceTicks(frame.x.domain[0], frame.x.domain[1]));
  const yTicks =
    labels.yTicks ??
    (frame.y.kind === "log"
      ? decadeTicks(frame.y.domain[0], frame.y.domain[1])
      : niceTicks(frame.y.domain[0], frame.y.domain[1]));

  for (const t of xTicks) {
    const px = fmtCoord(frame.x(t));
    parts.push(
      `<line x1="${px}" y1="${fmtCoord(frame.top)}" x2="${px}" y2="${fmtCoord(frame.bottom)}" stroke="${GRID}" stroke-width="0.5"/>`,
      `<line x1="${px}" y1="${fmtCoord(frame.bottom)}" x2="${px}" y2="${fmtCoord(frame.bottom + 5)}" stroke="${AXIS}" stroke-width="1"/>`,
      `<text x="${px}" y="${fmtCoord(frame.bottom + 18)}" font-size="11" fill="${TEXT}" text-anchor="middle">${fmtTick(t)}</text>`,
    );
  }
  for (const t of yTicks) {
    const py = fmtCoord(frame.y(t));
    parts.push(
      `<line x1="${fmtCoord(frame.left)}" y1="${py}" x2="${fmtCoord(frame.right)}" y2="${py}" stroke="${GRID}" stroke-width="0.5"/>`,
      `<line x1="${fmtCoord(frame.left - 5)}" y1="${py}" x2="${fmtCoord(frame.left)}" y2="${py}" stroke="${AXIS}" stroke-width="1"/>`,
      `<text x="${fmtCoord(frame.left - 8)}" y="${py}" font-size="11" fill="${TEXT}" text-anchor="end" dominant-baseline="middle">${fmtTick(t)}</text>`,
    );
  }
  parts.push(
    `<rect x="${fmtCoord(frame.left)}" y="${fmtCoord(frame.top)}" width="${fmtCoord(frame.right - frame.left)}" height="${fmtCoord(frame.bottom - frame.top)}" fill="none" stroke="${AXIS}" stroke-width="1"/>`,
    `<text x="${fmtCoord((frame.left + frame.right) / 2)}" y="${fmtCoord(frame.bottom + 36)}" font-size="12" fill="${TEXT}" text-anchor="middle">${escapeText(labels.xLabel)}</text>`,
    `<text x="16" y="${fmtCoord((frame.top + frame.bottom) / 2)}" font-size="12" fill="${TEXT}" text-anchor="middle" transform="rotate(-90 16 ${fmtCoord((frame.top + frame.bottom) / 2)})">${escapeText(labels.yLabel)}</text>`,
  );
  if (labels.title) {
    parts.push(
      `<text x="${fmtCoord((frame.left + frame.right) / 2)}" y="22" font-size="13" fill="${TEXT}" text-anchor="middle" font-weight="bold">${escapeText(labels.title)}</text>`,
    );
  }
  return parts.join("\n");
}

export function polyline(
  points: Array<[number, number]>,
  stroke: string,
  options: { width?: number; dash?: string; cssClass?: string } = {},
): string {
  const attr = [
    options.cssClass ? `class="${options.cssClass}"` : "",
    `fill="none"`,
    `stroke="${stroke}"`,
    `stroke-width="${options.width ?? 1.5}"`,
    options.dash ? `stroke-dasharray="${options.dash}"` : "",
  ]
    .filter(Boolean)
    .join(" ");
  const pts = points.map(([x, y]) => `${fmtCoord(x)},${fmtCoord(y)}`).join(" ");
  return `<polyline ${attr} points="${pts}"/>`;
}

export function circles(
  points: Array<[number, number]>,
  fill: string,
  r = 3,
  cssClass?: string,
): string {
  const cls = cssClass ? ` class="${cssClass}"` : "";
  return points
    .map(
      ([x, y]) =>
        `<circle${cls} cx="${fmtCoord(x)}" cy="${fmtCoord(y)}" r="${r}" fill="${fill}"/>`,
    )
    .join("\n");
}

/** Vertical error bars with small caps: pixel triples (x, yLow, yHigh). */
export function errorBars(bars: Array<[number, number, number]>, stroke: string): string {
  const parts: string[] = [];
  for (const [x, y0, y1] of bars) {
    const px = fmtCoord(x);
    parts.push(
      `<line x1="${px}" y1="${fmtCoord(y0)}" x2="${px}" y2="${fmtCoord(y1)}" stroke="${stroke}" stroke-width="1"/>`,
      `<line x1="${fmtCoord(x - 3)}" y1="${fmtCoord(y0)}" x2="${fmtCoord(x + 3)}" y2="${fmtCoord(y0)}" stroke="${stroke}" stroke-width="1"/>`,
      `<line x1="${fmtCoord(x - 3)}" y1="${fmtCoord(y1)}" x2="${fmtCoord(x + 3)}" y2="${fmtCoord(y1)}" stroke="${stroke}" stroke-width="1"/>`,
    );
  }
  return parts.join("\n");
}

export interface LegendEntry {
  label: string;
  color: string;
  dash?: string;
}

export function legend(frame: Frame, entries: LegendEntry[]): string {
  const parts: string[] = [];
  const x0 = frame.right - 150;
  let y = frame.top + 14;
  for (const entry of entries) {
    const dash = entry.dash ? ` stroke-dasharray="${entry.dash}"` : "";
    parts.push(
      `<line x1="${fmtCoord(x0)}" y1="${fmtCoord(y - 4)}" x2="${fmtCoord(x0 + 24)}" y2="${fmtCoord(y - 4)}" stroke="${entry.color}" stroke-width="2"${dash}/>`,
      `<text x="${fmtCoord(x0 + 30)}" y="${fmtCoord(y)}" font-size="11" fill="${TEXT}">${escapeText(entry.label)}</text>`,
    );
    y += 16;
  }
  return parts.join("\n");
}

export function horizontalRule(frame: Frame, value: number, color: string, label: string): string {
  const py = fmtCoord(frame.y(value));
  return [
    `<line x1="${fmtCoord(frame.left)}" y1="${py}" x2="${fmtCoord(frame.right)}" y2="${py}" stroke="${color}" stroke-width="1" stroke-dasharray="4 3"/>`,
    `<text x="${fmtCoord(frame.left + 6)}" y="${fmtCoord(frame.y(value) - 4)}" font-size="10" fill="${color}">${escapeText(label)}</text>`,
  ].join("\n");
}

export function svgDocument(width: number, height: number, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
    body,
    `</svg>`,
    ``,
  ].join("\n");
}
