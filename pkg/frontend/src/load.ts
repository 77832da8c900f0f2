/**
 * File loaders for the four figure inputs.
 *
 * CSV files are parsed with papaparse (header row, numeric typing).  Before
 * any schema runs, required columns are checked by name so the error for a
 * truncated export reads `record.csv: missing column "cum_trace"` rather
 * than a generic type failure.
 */

import { readFileSync } from "fs";
import { join } from "path";
// papaparse ships CommonJS only; named imports break under Node ESM
import Papa from "papaparse";
import { z } from "zod";
import {
  compareFixed,
  compareReport,
  CompareReport,
  landscapeRow,
  recordFixed,
  runConfig,
  RunConfig,
  sweepFixed,
  sweepSummary,
  SweepSummary,
} from "./schemas.js";

export type Row = Record<string, unknown>;

export function parseCsv(path: string): { rows: Row[]; columns: string[] } {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<Row>(text, {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new Error(`${path}: CSV parse error on row ${e.row}: ${e.message}`);
  }
  return { rows: parsed.data, columns: parsed.meta.fields ?? [] };
}

export function requireColumns(
  path: string,
  columns: string[],
  required: string[],
): void {
  for (const name of required) {
    if (!columns.includes(name)) {
      throw new Error(`${path}: missing column "${name}"`);
    }
  }
}

function validateRows<T>(
  path: string,
  rows: Row[],
  schema: z.ZodType<T>,
): T[] {
  return rows.map((row, i) => {
    const out = schema.safeParse(row);
    if (!out.success) {
      const issue = out.error.issues[0];
      const col = issue.path.join(".");
      throw new Error(
        `${path}: row ${i + 1}, column "${col}": ${issue.message}`,
      );
    }
    return out.data;
  });
}

function paramsFromColumns(columns: string[], prefix: string): string[] {
  return columns
    .filter((c) => c.startsWith(prefix))
    .map((c) => c.slice(prefix.length));
}

export interface RunData {
  config: RunConfig;
  params: string[];
  rows: Row[];
}

/** record.csv + config.json from one closed-loop run directory. */
export function loadRun(dir: string): RunData {
  const config = runConfig.parse(
    JSON.parse(readFileSync(join(dir, "config.json"), "utf8")),
  );
  const path = join(dir, "record.csv");
  const { rows, columns } = parseCsv(path);
  const params = config.scenario.params;
  const perParam = params.flatMap((p) => [
    `theta_${p}`,
    `sigma_${p}`,
    `abs_err_${p}`,
    `pct_err_${p}`,
  ]);
  requireColumns(path, columns, [
    "k",
    "score",
    "trace_fisher",
    "cum_trace",
    "iterations",
    "converged",
    ...perParam,
  ]);
  const numeric = recordFixed.extend(
    Object.fromEntries(perParam.map((c) => [c, z.number().finite()])),
  );
  return { config, params, rows: validateRows(path, rows, numeric) };
}

export interface SweepData {
  summary: SweepSummary;
  params: string[];
  rows: Row[];
}

/** sweep.csv + summary.json from a robustness sweep directory. */
export function loadSweep(dir: string): SweepData {
  const summary = sweepSummary.parse(
    JSON.parse(readFileSync(join(dir, "summary.json"), "utf8")),
  );
  const path = join(dir, "sweep.csv");
  const { rows, columns } = parseCsv(path);
  // prior_index is the sweep counter, not a parameter column
  const params = paramsFromColumns(columns, "prior_").filter(
    (p) => p !== "index",
  );
  if (params.length === 0) {
    throw new Error(`${path}: missing column "prior_<parameter>"`);
  }
  const perParam = params.flatMap((p) => [
    `prior_${p}`,
    `theta_${p}`,
    `abs_err_${p}`,
    `pct_err_${p}`,
  ]);
  requireColumns(path, columns, [
    "prior_index",
    "k",
    "trace_fisher",
    "cum_trace",
    ...perParam,
  ]);
  const numeric = sweepFixed.extend(
    Object.fromEntries(perParam.map((c) => [c, z.number().finite()])),
  );
  return { summary, params, rows: validateRows(path, rows, numeric) };
}

export interface LandscapeData {
  axes: [string, string];
  rows: { a1: number; a2: number; value: number }[];
}

/** A landscape CSV: first two columns are the state axes, third the value. */
export function loadLandscape(path: string): LandscapeData {
  const { rows, columns } = parseCsv(path);
  if (columns.length < 3) {
    throw new Error(`${path}: missing column "trace_f"`);
  }
  const [a1, a2] = columns;
  requireColumns(path, columns, [a1, a2, "trace_f"]);
  const schema = landscapeRow(a1, a2);
  const data = validateRows(path, rows, schema).map((r) => ({
    a1: r[a1] as number,
    a2: r[a2] as number,
    value: r.trace_f as number,
  }));
  return { axes: [a1, a2], rows: data };
}

export interface CompareData {
  report: CompareReport;
  params: string[];
  rows: Row[];
}

/** compare.csv + report.json from a paired comparison directory. */
export function loadCompare(dir: string): CompareData {
  const report = compareReport.parse(
    JSON.parse(readFileSync(join(dir, "report.json"), "utf8")),
  );
  const path = join(dir, "compare.csv");
  const { rows, columns } = parseCsv(path);
  const params = paramsFromColumns(columns, "med_abs_err_")
    .filter((c) => c.endsWith("_ca"))
    .map((c) => c.slice(0, -"_ca".length));
  if (params.length === 0) {
    throw new Error(`${path}: missing column "med_abs_err_<parameter>_ca"`);
  }
  const perParam = params.flatMap((p) => [
    `med_abs_err_${p}_ca`,
    `med_abs_err_${p}_baseline`,
  ]);
  requireColumns(path, columns, [
    "k",
    "med_cum_trace_ca",
    "med_cum_trace_baseline",
    ...perParam,
  ]);
  const numeric = compareFixed.extend(
    Object.fromEntries(perParam.map((c) => [c, z.number().finite()])),
  );
  return { report, params, rows: validateRows(path, rows, numeric) };
}
