import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { boxCenter, toScreen } from "../src/geometry.js";
import { FIGURE_KINDS, renderFigure } from "../src/render.js";
import {
  MissingField,
  SchemaMismatch,
  parseCsv,
  parseRecord,
} from "../src/schema.js";
import { fmt } from "../src/svg.js";

const FIXTURES = join(__dirname, "fixtures");
const record = join(FIXTURES, "record.json");
const sweep = join(FIXTURES, "sweep.json");
const cohort = join(FIXTURES, "cohort.json");
const surrogate = join(FIXTURES, "surrogate.csv");

const inputsFor: Record<string, string[]> = {
  embedding_portrait: [record],
  polar_scatter: [record],
  FE_split: [record],
  met_surface: [record],
  sweep_scatter: [sweep],
  phase_boxplot: [sweep, record],
  cohort_phases: [cohort],
  surrogate_trace: [surrogate],
};

function tempJson(value: unknown): string {
  const dir = mkdtempSync(join(tmpdir(), "figures-"));
  const path = join(dir, "input.json");
  writeFileSync(path, JSON.stringify(value));
  return path;
}

describe("renderFigure", () => {
  for (const kind of FIGURE_KINDS) {
    it(`renders ${kind} deterministically`, () => {
      const first = renderFigure(kind, inputsFor[kind]);
      const second = renderFigure(kind, inputsFor[kind]);
      expect(first).toContain("<svg");
      expect(first).toContain("</svg>");
      expect(first.length).toBeGreaterThan(200);
      expect(second).toBe(first);
      expect(first).not.toMatch(/\d{4}-\d{2}-\d{2}/); // no timestamps
    });
  }

  it("rejects empty input lists", () => {
    expect(() => renderFigure("FE_split", [])).toThrow(MissingField);
  });
});

describe("FE_split semantics", () => {
  const report = JSON.parse(readFileSync(record, "utf8"));
  const svg = renderFigure("FE_split", [record]);

  it("draws one blue circle per transition-set box", () => {
    const blue = svg.match(/<circle[^>]*stroke="blue"/g) ?? [];
    expect(blue.length).toBe(report.decomposition.F.length);
    expect(svg).toContain('class="transition-set"');
  });

  it("draws one red circle per absorbing-set box", () => {
    const red = svg.match(/<circle[^>]*stroke="red"/g) ?? [];
    expect(red.length).toBe(report.decomposition.E.length);
    expect(svg).toContain('class="absorbing-set"');
  });

  it("marks each entry state with a black cross at its box center", () => {
    const black = svg.match(/<line[^>]*stroke="black"/g) ?? [];
    expect(black.length).toBe(2 * report.decomposition.entry_states.length);
    const entry = report.decomposition.entry_states[0];
    const grid = report.model.grid;
    const c = boxCenter(grid.P, grid.Q, entry.box);
    const { x, y } = toScreen(c.re, c.im, 240, 240, 200);
    expect(svg).toContain(`x1="${fmt(x - 7)}" y1="${fmt(y - 7)}"`);
  });
});

describe("met_surface semantics", () => {
  it("places the black plus at the minimal-MET box", () => {
    const report = JSON.parse(readFileSync(record, "utf8"));
    const svg = renderFigure("met_surface", [record]);
    const grid = report.model.grid;
    const c = boxCenter(grid.P, grid.Q, report.escape.i_min_box);
    const { x, y } = toScreen(c.re, c.im, 240, 240, 200);
    expect(svg).toContain(`x1="${fmt(x - 8)}" y1="${fmt(y)}"`);
    expect(svg).toContain(report.escape.display.met_F);
  });
});

describe("error handling", () => {
  it("phase_boxplot with an empty record list fails, no empty image", () => {
    const path = tempJson([]);
    expect(() => renderFigure("phase_boxplot", [path])).toThrow(MissingField);
  });

  it("phase_boxplot with only failed records fails", () => {
    const report = JSON.parse(readFileSync(record, "utf8"));
    report.status = "EmptyAbsorbingSet";
    report.escape = null;
    report.decomposition = null;
    const path = tempJson([report]);
    expect(() => renderFigure("phase_boxplot", [path])).toThrow(MissingField);
  });

  it("rejects unknown schema versions", () => {
    const report = JSON.parse(readFileSync(record, "utf8"));
    report.schema_version = 2;
    expect(() => parseRecord(report)).toThrow(SchemaMismatch);
  });

  it("reports the missing field on malformed records", () => {
    const report = JSON.parse(readFileSync(record, "utf8"));
    delete report.n_emp;
    expect(() => parseRecord(report)).toThrow(MissingField);
    expect(() => parseRecord(report)).toThrow(/n_emp/);
  });

  it("rejects CSVs with the wrong header", () => {
    expect(() =>
      parseCsv("a,b\n1,2\n", ["step", "box", "re", "im"]),
    ).toThrow(SchemaMismatch);
  });
});

describe("geometry", () => {
  it("matches the report's entry-state polar coordinates", () => {
    const report = JSON.parse(readFileSync(record, "utf8"));
    const grid = report.model.grid;
    for (const entry of report.decomposition.entry_states) {
      const c = boxCenter(grid.P, grid.Q, entry.box);
      expect(c.R).toBeCloseTo(entry.R, 10);
      expect(c.psiDeg).toBeCloseTo(entry.psi_deg, 10);
    }
  });

  it("rejects out-of-range boxes", () => {
    expect(() => boxCenter(10, 72, 0)).toThrow(RangeError);
    expect(() => boxCenter(10, 72, 721)).toThrow(RangeError);
  });
});
