/**
 * Validation of the analysis report formats this package consumes.
 *
 * Every figure is drawn from fields defined here; nothing is recomputed
 * from raw signals.
 */

import { z } from "zod";

export const SCHEMA_VERSION = 1;

/** Input claims a schema version this renderer does not understand. */
export class SchemaMismatch extends Error {}

/** Input parses as JSON/CSV but lacks a field a figure needs. */
export class MissingField extends Error {}

const eventSchema = z.object({
  subject: z.string(),
  dataset: z.string(),
  t_start: z.number().int(),
  t_end: z.number().int(),
  label: z.string(),
});

const entryStateSchema = z.object({
  box: z.number().int(),
  R: z.number(),
  psi_deg: z.number(),
});

const decompositionSchema = z.object({
  classes: z.array(z.array(z.number().int())),
  order: z.array(z.array(z.number().int()).length(2)),
  stepping_class_id: z.number().int(),
  F: z.array(z.number().int()).optional(),
  E: z.array(z.number().int()).optional(),
  entry_states: z.array(entryStateSchema).optional(),
  psi_tr_deg: z.number().nullable().optional(),
});

const escapeSchema = z.object({
  met_i_seconds: z.array(z.number()),
  met_F_seconds: z.number(),
  mix_F_seconds: z.number(),
  lambda1: z.number(),
  lambda_dec: z.number(),
  s_F: z.array(z.number()),
  i_min_box: z.number().int(),
  R_min: z.number(),
  psi_min_deg: z.number(),
  below_mean_boxes: z.array(z.number().int()),
  multiple_minima: z.boolean(),
  display: z.record(z.string()),
});

const modelSchema = z.object({
  grid: z.object({ P: z.number().int(), Q: z.number().int() }),
  support: z.array(z.number().int()),
  counts: z.array(z.array(z.number().int()).length(3)),
});

export const recordSchema = z.object({
  schema_version: z.number().int(),
  event: eventSchema,
  grid: z.object({ p: z.number(), q: z.number() }),
  status: z.string(),
  message: z.string(),
  n_emp: z.number().int(),
  f_count: z.number().int(),
  stepping_fraction: z.number(),
  psi_tr_deg: z.number().nullable(),
  decomposition: decompositionSchema.nullable(),
  escape: escapeSchema.nullable(),
  model: modelSchema.optional(),
});

export const cohortSchema = z.object({
  schema_version: z.number().int(),
  rows: z.array(
    z.object({
      subject: z.string(),
      dataset: z.string(),
      label: z.string(),
      status: z.string(),
      psi_min_deg: z.number().nullable(),
      met_F_seconds: z.number().nullable(),
      mix_F_seconds: z.number().nullable(),
    }),
  ),
  subjects: z.record(
    z.object({
      n_events: z.number().int(),
      circular_mean_deg: z.number(),
      circular_std_deg: z.number(),
      rayleigh_p: z.number(),
    }),
  ),
});

export type AnalysisRecord = z.infer<typeof recordSchema>;
export type CohortSummary = z.infer<typeof cohortSchema>;

function checkVersion(raw: unknown, source: string): void {
  const version = (raw as { schema_version?: unknown })?.schema_version;
  if (version !== SCHEMA_VERSION) {
    throw new SchemaMismatch(
      `${source}: schema_version ${String(version)} is not ${SCHEMA_VERSION}`,
    );
  }
}

function runSchema<T>(schema: z.ZodType<T>, raw: unknown, source: string): T {
  const result = schema.safeParse(raw);
  if (!result.success) {
    const issue = result.error.issues[0];
    throw new MissingField(
      `${source}: ${issue.path.join(".")}: ${issue.message}`,
    );
  }
  return result.data;
}

export function parseRecord(raw: unknown, source = "record"): AnalysisRecord {
  checkVersion(raw, source);
  return runSchema(recordSchema, raw, source);
}

/** Sweep outputs hold one record per (p, q, interval) cell. */
export function parseRecordList(
  raw: unknown,
  source = "records",
): AnalysisRecord[] {
  const items = Array.isArray(raw) ? raw : [raw];
  return items.map((item, n) => parseRecord(item, `${source}[${n}]`));
}

export function parseCohort(raw: unknown, source = "cohort"): CohortSummary {
  checkVersion(raw, source);
  return runSchema(cohortSchema, raw, source);
}

/** Numeric CSV with a header row, as written by the analysis CLI. */
export function parseCsv(
  text: string,
  expectedHeader: string[],
  source = "csv",
): number[][] {
  const lines = text.split(/\r?\n/).filter((line) => line.trim().length > 0);
  if (lines.length === 0) {
    throw new MissingField(`${source}: empty file`);
  }
  const header = lines[0].split(",").map((h) => h.trim().toLowerCase());
  if (header.join(",") !== expectedHeader.join(",")) {
    throw new SchemaMismatch(
      `${source}: header [${header.join(",")}] is not [${expectedHeader.join(",")}]`,
    );
  }
  return lines.slice(1).map((line, n) => {
    const cells = line.split(",").map(Number);
    if (cells.length !== expectedHeader.length || cells.some(Number.isNaN)) {
      throw new MissingField(`${source}: bad row ${n + 2}`);
    }
    return cells;
  });
}
