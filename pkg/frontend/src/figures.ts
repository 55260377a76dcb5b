/**
 * The four figure builders. Pure file-to-file transformations: each consumes
 * tables or fit records emitted by the simulation/analysis CLI and renders
 * them; nothing is refit or recomputed beyond axis arithmetic.
 */

import { legendreSum } from "./legendre.js";
import {
  PALETTE,
  axes,
  circles,
  errorBars,
  horizontalRule,
  legend,
  makeFrame,
  niceTicks,
  polyline,
  svgDocument,
  type Frame,
  type LegendEntry,
} from "./svg.js";
import { SchemaError, column, metaNumber, parseTable, type Table } from "./table.js";

export const FIGURE_KINDS = [
  "scaled-spectra",
  "angular-fit",
  "mixing-scatter",
  "scan-curves",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface InputFile {
  path: string;
  text: string;
}

/** Wrong invocation shape (counts, kinds), as opposed to bad file content. */
export class UsageError extends Error {}

const POISSON_R = 2 * Math.log(2) - 1;
const GOE_R = 0.5307;
const WEIGHT_FLOOR = 1e-12;

function color(i: number): string {
  return PALETTE[i % PALETTE.length] as string;
}

function pad(lo: number, hi: number, frac = 0.04): [number, number] {
  const span = hi - lo || Math.abs(hi) || 1;
  return [lo - span * frac, hi + span * frac];
}

/* scaled-spectra: intensity vs emission energy, one curve per angle,
   shared log y axis so a common temperature reads as a common slope. */
function scaledSpectra(inputs: InputFile[]): string {
  if (inputs.length < 1) {
    throw new UsageError("scaled-spectra needs at least one scaled CSV");
  }
  const tables = inputs.map((f) => parseTable(f.text, f.path));
  interface Curve {
    angle: number;
    pts: Array<[number, number]>;
  }
  const curves: Curve[] = [];
  let eLo = Infinity;
  let eHi = -Infinity;
  let iLo = Infinity;
  let iHi = -Infinity;
  for (const table of tables) {
    const e = column(table, "E_MeV");
    const intensity = column(table, "intensity");
    column(table, "intensity_err");
    const angle = metaNumber(table, "angle_deg");
    const pts: Array<[number, number]> = [];
    for (let i = 0; i < table.rowCount; i++) {
      const yi = intensity[i] as number;
      if (yi <= 0) continue;
      const xi = e[i] as number;
      pts.push([xi, yi]);
      eLo = Math.min(eLo, xi);
      eHi = Math.max(eHi, xi);
      iLo = Math.min(iLo, yi);
      iHi = Math.max(iHi, yi);
    }
    if (pts.length === 0) {
      throw new SchemaError(`${table.path}: no positive intensities to draw`);
    }
    curves.push({ angle, pts });
  }

  const frame = makeFrame(pad(eLo, eHi), [iLo / 1.5, iHi * 1.5], { yKind: "log" });
  const body: string[] = [
    axes(frame, {
      title: "scaled proton spectra",
      xLabel: "E (MeV)",
      yLabel: "I(E) = yield / (E P(E))  (arb. units)",
    }),
  ];
  const entries: LegendEntry[] = [];
  curves.forEach((curve, i) => {
    const pix = curve.pts.map(
      ([x, y]) => [frame.x(x), frame.y(y)] as [number, number],
    );
    body.push(polyline(pix, color(i), { cssClass: "curve" }));
    body.push(circles(pix, color(i), 2.5));
    entries.push({ label: `${curve.angle} deg`, color: color(i) });
  });
  body.push(legend(frame, entries));
  return svgDocument(frame.width, frame.height, body.join("\n"));
}

/* angular-fit: measured differential cross section with the fitted
   Legendre curve overlaid, evaluated from the emitted coefficients. */
function angularFit(inputs: InputFile[]): string {
  if (inputs.length !== 2) {
    throw new UsageError(
      "angular-fit needs exactly two inputs: the angular CSV and the report JSON",
    );
  }
  let table: Table | null = null;
  let coefficients: number[] | null = null;
  for (const input of inputs) {
    if (input.text.trimStart().startsWith("{")) {
      let parsed: unknown;
      try {
        parsed = JSON.parse(input.text);
      } catch (err) {
        throw new SchemaError(`${input.path}: not valid JSON: ${(err as Error).message}`);
      }
      const angular = (parsed as { angular?: { coefficients?: unknown } }).angular;
      if (!angular || !Array.isArray(angular.coefficients)) {
        throw new SchemaError(
          `${input.path}: missing field angular.coefficients in fit record`,
        );
      }
      coefficients = angular.coefficients.map(Number);
    } else {
      table = parseTable(input.text, input.path);
    }
  }
  if (table === null || coefficients === null) {
    throw new UsageError(
      "angular-fit needs one angular CSV and one report JSON (got two of the same kind)",
    );
  }

  const thetas = column(table, "theta_deg");
  const dsdo = column(table, "dsdo_mb_sr");
  const errs = column(table, "err");

  const grid: Array<[number, number]> = [];
  let yMax = 0;
  for (let t = 0; t <= 180 + 1e-9; t += 1.5) {
    const value = legendreSum(coefficients, Math.cos((t * Math.PI) / 180));
    grid.push([t, value]);
    yMax = Math.max(yMax, value);
  }
  for (let i = 0; i < table.rowCount; i++) {
    yMax = Math.max(yMax, (dsdo[i] as number) + (errs[i] as number));
  }

  const frame = makeFrame([0, 180], [0, yMax * 1.1]);
  const body: string[] = [
    axes(frame, {
      title: "angular distribution with Legendre fit",
      xLabel: "lab angle (deg)",
      yLabel: "ds/dO (mb/sr)",
      xTicks: [0, 30, 60, 90, 120, 150, 180],
    }),
  ];

  const dataPix: Array<[number, number]> = [];
  const bars: Array<[number, number, number]> = [];
  for (let i = 0; i < table.rowCount; i++) {
    const px = frame.x(thetas[i] as number);
    const yi = dsdo[i] as number;
    const si = errs[i] as number;
    dataPix.push([px, frame.y(yi)]);
    if (si > 0) bars.push([px, frame.y(yi - si), frame.y(yi + si)]);
  }
  body.push(errorBars(bars, color(0)));
  body.push(circles(dataPix, color(0), 3.5, "data"));
  body.push(
    polyline(
      grid.map(([t, v]) => [frame.x(t), frame.y(v)] as [number, number]),
      color(1),
      { cssClass: "fit-overlay", width: 2 },
    ),
  );
  body.push(
    legend(frame, [
      { label: `data (${table.rowCount} angles)`, color: color(0) },
      { label: `Legendre fit, order ${coefficients.length - 1}`, color: color(1) },
    ]),
  );
  return svgDocument(frame.width, frame.height, body.join("\n"));
}

/* mixing-scatter: eigenstate weights over register energies. Weights at
   numerical zero are dropped, so an uncoupled run shows one marker per
   eigenstate. */
function mixingScatter(inputs: InputFile[]): string {
  if (inputs.length !== 1) {
    throw new UsageError("mixing-scatter needs exactly one mixing CSV");
  }
  const input = inputs[0] as InputFile;
  const table = parseTable(input.text, input.path);
  const eigenstate = column(table, "eigenstate");
  const energies = column(table, "E_i");
  const weights = column(table, "W_i");
  column(table, "eigenvalue");

  const groups = new Map<number, Array<[number, number]>>();
  let eLo = Infinity;
  let eHi = -Infinity;
  let wMax = 0;
  for (let i = 0; i < table.rowCount; i++) {
    const w = weights[i] as number;
    if (w < WEIGHT_FLOOR) continue;
    const k = eigenstate[i] as number;
    const e = energies[i] as number;
    let pts = groups.get(k);
    if (pts === undefined) {
      pts = [];
      groups.set(k, pts);
    }
    pts.push([e, w]);
    eLo = Math.min(eLo, e);
    eHi = Math.max(eHi, e);
    wMax = Math.max(wMax, w);
  }
  if (groups.size === 0) {
    throw new SchemaError(`${table.path}: all mixing weights below ${WEIGHT_FLOOR}`);
  }

  const frame = makeFrame(pad(eLo, eHi), [0, Math.max(wMax, 1) * 1.08]);
  const body: string[] = [
    axes(frame, {
      title: "eigenstate mixing weights",
      xLabel: "register state energy E_i",
      yLabel: "weight W_i",
    }),
  ];
  const entries: LegendEntry[] = [];
  let gi = 0;
  for (const [k, pts] of groups) {
    const pix = pts.map(([e, w]) => [frame.x(e), frame.y(w)] as [number, number]);
    body.push(circles(pix, color(gi), 3, "mix-point"));
    entries.push({ label: `eigenstate ${k}`, color: color(gi) });
    gi++;
  }
  if (entries.length <= 8) body.push(legend(frame, entries));
  return svgDocument(frame.width, frame.height, body.join("\n"));
}

/* scan-curves: participation, spreading width, and spacing ratio against
   the coupling strength, three panels on a shared abscissa. */
function scanCurves(inputs: InputFile[]): string {
  if (inputs.length !== 1) {
    throw new UsageError("scan-curves needs exactly one scan CSV");
  }
  const input = inputs[0] as InputFile;
  const table = parseTable(input.text, input.path);
  const j = column(table, "j_over_delta0");
  const panels = [
    { mean: "pr_mean", std: "pr_std", label: "participation" },
    { mean: "gamma_mean", std: "gamma_std", label: "spreading width" },
    { mean: "r_mean", std: "r_std", label: "spacing ratio" },
  ] as const;

  const width = 640;
  const height = 720;
  const panelGap = 26;
  const panelTop = 38;
  const panelBottom = height - 48;
  const panelHeight = (panelBottom - panelTop - 2 * panelGap) / 3;
  const xDomain = pad(Math.min(...j), Math.max(...j));

  const body: string[] = [];
  panels.forEach((panel, pi) => {
    const mean = column(table, panel.mean);
    const std = column(table, panel.std);
    let lo = Infinity;
    let hi = -Infinity;
    for (let i = 0; i < table.rowCount; i++) {
      lo = Math.min(lo, (mean[i] as number) - (std[i] as number));
      hi = Math.max(hi, (mean[i] as number) + (std[i] as number));
    }
    if (panel.mean === "r_mean") {
      lo = Math.min(lo, POISSON_R - 0.02);
      hi = Math.max(hi, GOE_R + 0.02);
    }
    const top = panelTop + pi * (panelHeight + panelGap);
    const frame: Frame = makeFrame(xDomain, pad(lo, hi, 0.06), {
      width,
      height,
      top,
      bottom: top + panelHeight,
    });
    const last = pi === panels.length - 1;
    body.push(
      axes(frame, {
        title: pi === 0 ? "coupling-strength scan" : undefined,
        xLabel: last ? "J / Delta0" : "",
        yLabel: panel.label,
        yTicks: niceTicks(frame.y.domain[0], frame.y.domain[1], 4),
      }),
    );
    const pix = j.map(
      (x, i) => [frame.x(x), frame.y(mean[i] as number)] as [number, number],
    );
    const bars: Array<[number, number, number]> = [];
    for (let i = 0; i < table.rowCount; i++) {
      const s = std[i] as number;
      if (s > 0) {
        bars.push([
          frame.x(j[i] as number),
          frame.y((mean[i] as number) - s),
          frame.y((mean[i] as number) + s),
        ]);
      }
    }
    body.push(errorBars(bars, color(pi)));
    body.push(polyline(pix, color(pi), { cssClass: "curve" }));
    body.push(circles(pix, color(pi), 3));
    if (panel.mean === "r_mean") {
      body.push(horizontalRule(frame, POISSON_R, "#888888", "Poisson"));
      body.push(horizontalRule(frame, GOE_R, "#888888", "GOE"));
    }
  });
  return svgDocument(width, height, body.join("\n"));
}

/** Render one figure from already-loaded input files. */
export function makeFigure(kind: string, inputs: InputFile[]): string {
  switch (kind) {
    case "scaled-spectra":
      return scaledSpectra(inputs);
    case "angular-fit":
      return angularFit(inputs);
    case "mixing-scatter":
      return mixingScatter(inputs);
    case "scan-curves":
      return scanCurves(inputs);
    default:
      throw new UsageError(
        `unknown figure kind '${kind}' (expected one of: ${FIGURE_KINDS.join(", ")})`,
      );
  }
}
