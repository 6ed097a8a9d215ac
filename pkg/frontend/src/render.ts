/**
 * Figure rendering from analysis reports.
 *
 * Every quantity drawn here is read from a report field; the renderer
 * never recomputes analysis results.  Output is deterministic SVG with
 * no timestamps, so repeated runs are byte-identical.
 */

import { readFileSync } from "node:fs";

import { boxCenter, toScreen } from "./geometry.js";
import {
  AnalysisRecord,
  MissingField,
  SchemaMismatch,
  parseCohort,
  parseCsv,
  parseRecord,
  parseRecordList,
} from "./schema.js";
import { Svg, fmt } from "./svg.js";

export const FIGURE_KINDS = [
  "embedding_portrait",
  "polar_scatter",
  "FE_split",
  "met_surface",
  "sweep_scatter",
  "phase_boxplot",
  "cohort_phases",
  "surrogate_trace",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureJob {
  kind: FigureKind;
  inputs: string[];
  output: string;
}

const SIZE = 480;
const CX = SIZE / 2;
const CY = SIZE / 2;
const SCALE = 200;

function loadJson(path: string): unknown {
  try {
    return JSON.parse(readFileSync(path, "utf8"));
  } catch (err) {
    if (err instanceof SyntaxError) {
      throw new SchemaMismatch(`${path}: not valid JSON`);
    }
    throw err;
  }
}

function gridOf(record: AnalysisRecord): { P: number; Q: number } {
  if (record.model) {
    return record.model.grid;
  }
  return {
    P: Math.round(1 / record.grid.p),
    Q: Math.round(360 / record.grid.q),
  };
}

function need<T>(value: T | null | undefined, field: string): T {
  if (value === null || value === undefined) {
    throw new MissingField(`record has no ${field} (status not ok?)`);
  }
  return value;
}

function title(record: AnalysisRecord): string {
  const ev = record.event;
  return `${ev.subject}_${ev.dataset} [${ev.t_start},${ev.t_end}]`;
}

function diskFrame(svg: Svg, P: number): void {
  for (let k = 1; k <= P; k += 1) {
    svg.circle(CX, CY, (SCALE * k) / P, k === P ? "#333333" : "#dddddd");
  }
  svg.line(CX - SCALE, CY, CX + SCALE, CY, "#dddddd");
  svg.line(CX, CY - SCALE, CX, CY + SCALE, "#dddddd");
}

function visitMass(record: AnalysisRecord): Map<number, number> {
  const model = need(record.model, "model");
  const mass = new Map<number, number>();
  for (const [i, , c] of model.counts) {
    mass.set(i, (mass.get(i) ?? 0) + c);
  }
  return mass;
}

function renderEmbeddingPortrait(record: AnalysisRecord): string {
  const { P, Q } = gridOf(record);
  const mass = visitMass(record);
  const maxMass = Math.max(...mass.values(), 1);
  const svg = new Svg(SIZE, SIZE);
  diskFrame(svg, P);
  for (const box of need(record.model, "model").support) {
    const c = boxCenter(P, Q, box);
    const { x, y } = toScreen(c.re, c.im, CX, CY, SCALE);
    const r = 1.5 + 4 * Math.sqrt((mass.get(box) ?? 0) / maxMass);
    svg.circle(x, y, r, "#555555", "#bbccee");
  }
  if (record.escape) {
    const c = boxCenter(P, Q, record.escape.i_min_box);
    const { x, y } = toScreen(c.re, c.im, CX, CY, SCALE);
    svg.cross(x, y, 7, "red");
  }
  svg.text(10, 20, `embedding support ${title(record)}`);
  return svg.toString();
}

function renderPolarScatter(record: AnalysisRecord): string {
  const { P, Q } = gridOf(record);
  const mass = visitMass(record);
  const maxMass = Math.max(...mass.values(), 1);
  const width = 640;
  const height = 400;
  const left = 50;
  const bottom = height - 40;
  const svg = new Svg(width, height);
  svg.line(left, bottom, width - 20, bottom, "#333333");
  svg.line(left, bottom, left, 30, "#333333");
  for (let deg = 0; deg <= 360; deg += 90) {
    const x = left + ((width - 70) * deg) / 360;
    svg.line(x, bottom, x, bottom + 5, "#333333");
    svg.text(x - 10, bottom + 20, `${deg}`, 10);
  }
  for (const box of need(record.model, "model").support) {
    const c = boxCenter(P, Q, box);
    const x = left + ((width - 70) * c.psiDeg) / 360;
    const y = bottom - (bottom - 40) * c.R;
    const r = 1 + 3 * Math.sqrt((mass.get(box) ?? 0) / maxMass);
    svg.circle(x, y, r, "#336699", "#336699");
  }
  svg.text(10, 20, `amplitude vs phase (deg) ${title(record)}`);
  return svg.toString();
}

function renderFeSplit(record: AnalysisRecord): string {
  const { P, Q } = gridOf(record);
  const dec = need(record.decomposition, "decomposition");
  const F = need(dec.F, "decomposition.F");
  const E = need(dec.E, "decomposition.E");
  const svg = new Svg(SIZE, SIZE);
  diskFrame(svg, P);
  for (const box of F) {
    const c = boxCenter(P, Q, box);
    const { x, y } = toScreen(c.re, c.im, CX, CY, SCALE);
    svg.circle(x, y, 3, "blue", "none", { class: "transition-set" });
  }
  for (const box of E) {
    const c = boxCenter(P, Q, box);
    const { x, y } = toScreen(c.re, c.im, CX, CY, SCALE);
    svg.circle(x, y, 3, "red", "none", { class: "absorbing-set" });
  }
  for (const entry of dec.entry_states ?? []) {
    const c = boxCenter(P, Q, entry.box);
    const { x, y } = toScreen(c.re, c.im, CX, CY, SCALE);
    svg.cross(x, y, 7, "black");
  }
  svg.text(10, 20, `F/E split ${title(record)}`);
  svg.text(10, 38, `|F|=${F.length} |E|=${E.length}`, 10);
  return svg.toString();
}

function renderMetSurface(record: AnalysisRecord): string {
  const { P, Q } = gridOf(record);
  const dec = need(record.decomposition, "decomposition");
  const F = need(dec.F, "decomposition.F");
  const escape = need(record.escape, "escape");
  if (escape.met_i_seconds.length !== F.length) {
    throw new MissingField("met_i_seconds does not align with F");
  }
  const maxMet = Math.max(...escape.met_i_seconds);
  const below = new Set(escape.below_mean_boxes);
  const svg = new Svg(SIZE, SIZE);
  diskFrame(svg, P);
  F.forEach((box, n) => {
    const c = boxCenter(P, Q, box);
    const { x, y } = toScreen(c.re, c.im, CX, CY, SCALE);
    const met = escape.met_i_seconds[n];
    const shade = Math.round(220 - (180 * met) / maxMet);
    svg.circle(x, y, 4, "none", `rgb(${shade},${shade},255)`);
    if (below.has(box)) {
      svg.cross(x, y, 3, "magenta", 1);
    }
  });
  const c = boxCenter(P, Q, escape.i_min_box);
  const { x, y } = toScreen(c.re, c.im, CX, CY, SCALE);
  svg.plus(x, y, 8, "black");
  svg.text(10, 20, `MET by state (top view) ${title(record)}`);
  svg.text(
    10,
    38,
    `MET_F=${escape.display["met_F"]}s psi_min=${escape.display["psi_min"]}`,
    10,
  );
  return svg.toString();
}

function renderSweepScatter(records: AnalysisRecord[]): string {
  const width = 640;
  const height = 400;
  const left = 50;
  const bottom = height - 40;
  const svg = new Svg(width, height);
  svg.line(left, bottom, width - 20, bottom, "#333333");
  svg.line(left, bottom, left, 30, "#333333");
  for (let deg = 0; deg <= 360; deg += 90) {
    const y = bottom - ((bottom - 40) * deg) / 360;
    svg.line(left - 5, y, left, y, "#333333");
    svg.text(8, y + 4, `${deg}`, 10);
  }
  const step = (width - 80) / Math.max(records.length, 1);
  records.forEach((record, n) => {
    const x = left + step * (n + 0.5);
    if (record.escape) {
      const y = bottom - ((bottom - 40) * record.escape.psi_min_deg) / 360;
      svg.circle(x, y, 4, "#336699", "#336699");
    } else {
      svg.cross(x, bottom - 8, 4, "red", 1);
    }
    svg.text(x - 14, bottom + 18, `${record.grid.p}/${record.grid.q}`, 8);
  });
  svg.text(10, 20, `psi_min (deg) per sweep cell p/q`);
  return svg.toString();
}

function quantile(sorted: number[], q: number): number {
  const pos = (sorted.length - 1) * q;
  const lo = Math.floor(pos);
  const hi = Math.ceil(pos);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo);
}

function renderPhaseBoxplot(records: AnalysisRecord[]): string {
  const phases = records
    .filter((r) => r.escape !== null)
    .map((r) => r.escape!.psi_min_deg)
    .sort((a, b) => a - b);
  if (phases.length === 0) {
    throw new MissingField("no successful records to box-plot");
  }
  const width = 300;
  const height = 400;
  const bottom = height - 40;
  const scaleY = (deg: number) => bottom - ((bottom - 40) * deg) / 360;
  const svg = new Svg(width, height);
  svg.line(60, bottom, 60, 30, "#333333");
  for (let deg = 0; deg <= 360; deg += 90) {
    svg.line(55, scaleY(deg), 60, scaleY(deg), "#333333");
    svg.text(18, scaleY(deg) + 4, `${deg}`, 10);
  }
  const x = 160;
  const q1 = quantile(phases, 0.25);
  const q2 = quantile(phases, 0.5);
  const q3 = quantile(phases, 0.75);
  svg.line(x, scaleY(phases[0]), x, scaleY(q1), "#333333");
  svg.line(x, scaleY(q3), x, scaleY(phases[phases.length - 1]), "#333333");
  svg.rect(x - 40, scaleY(q3), 80, scaleY(q1) - scaleY(q3), "#336699");
  svg.line(x - 40, scaleY(q2), x + 40, scaleY(q2), "red", 2);
  svg.text(10, 20, `psi_min (deg), n=${phases.length}`);
  return svg.toString();
}

function renderCohortPhases(path: string): string {
  const cohort = parseCohort(loadJson(path), path);
  const subjects = Object.keys(cohort.subjects).sort();
  if (subjects.length === 0) {
    throw new MissingField("cohort has no subjects");
  }
  const width = 640;
  const height = 80 + 40 * subjects.length;
  const left = 90;
  const svg = new Svg(width, height);
  svg.line(left, height - 30, width - 20, height - 30, "#333333");
  const scaleX = (deg: number) => left + ((width - 110) * deg) / 360;
  for (let deg = 0; deg <= 360; deg += 90) {
    svg.line(scaleX(deg), height - 30, scaleX(deg), height - 25, "#333333");
    svg.text(scaleX(deg) - 10, height - 12, `${deg}`, 10);
  }
  subjects.forEach((subject, n) => {
    const stats = cohort.subjects[subject];
    const y = 50 + 40 * n;
    const mean = stats.circular_mean_deg;
    const lo = Math.max(0, mean - stats.circular_std_deg);
    const hi = Math.min(360, mean + stats.circular_std_deg);
    svg.line(scaleX(lo), y, scaleX(hi), y, "#99aacc", 3);
    svg.circle(scaleX(mean), y, 5, "#336699", "#336699");
    svg.text(10, y + 4, `${subject} (${stats.n_events})`, 11);
  });
  svg.text(10, 20, "preferred escape phase by subject (deg)");
  return svg.toString();
}

function renderSurrogateTrace(path: string): string {
  const rows = parseCsv(
    readFileSync(path, "utf8"),
    ["step", "box", "re", "im"],
    path,
  );
  const width = 640;
  const height = 300;
  const left = 50;
  const bottom = height - 30;
  const res = rows.map((r) => r[2]);
  const lo = Math.min(...res, -1);
  const hi = Math.max(...res, 1);
  const svg = new Svg(width, height);
  svg.line(left, bottom, width - 20, bottom, "#333333");
  svg.line(left, bottom, left, 20, "#333333");
  const points: Array<[number, number]> = rows.map((row, n) => [
    left + ((width - 70) * n) / Math.max(rows.length - 1, 1),
    bottom - ((bottom - 30) * (row[2] - lo)) / (hi - lo),
  ]);
  svg.polyline(points, "#336699");
  svg.text(10, 14, `surrogate walk, real part (${rows.length} steps)`);
  return svg.toString();
}

export function renderFigure(kind: FigureKind, inputs: string[]): string {
  if (inputs.length === 0) {
    throw new MissingField("no input files given");
  }
  switch (kind) {
    case "embedding_portrait":
      return renderEmbeddingPortrait(parseRecord(loadJson(inputs[0])));
    case "polar_scatter":
      return renderPolarScatter(parseRecord(loadJson(inputs[0])));
    case "FE_split":
      return renderFeSplit(parseRecord(loadJson(inputs[0])));
    case "met_surface":
      return renderMetSurface(parseRecord(loadJson(inputs[0])));
    case "sweep_scatter":
      return renderSweepScatter(
        inputs.flatMap((p) => parseRecordList(loadJson(p), p)),
      );
    case "phase_boxplot":
      return renderPhaseBoxplot(
        inputs.flatMap((p) => parseRecordList(loadJson(p), p)),
      );
    case "cohort_phases":
      return renderCohortPhases(inputs[0]);
    case "surrogate_trace":
      return renderSurrogateTrace(inputs[0]);
  }
}

export { fmt };
