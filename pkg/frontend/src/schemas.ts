/**
 * Zod schemas and column contracts for the harness output files.
 *
 * Every loader validates column presence by name before touching values, so
 * a truncated or reordered export fails with a message that says exactly
 * which column is missing from which file.
 */

import { z } from "zod";

const finite = z.number().finite();

/** One row of a run directory's record.csv (fixed columns only). */
export const recordFixed = z.object({
  k: finite.int().nonnegative(),
  score: finite,
  trace_fisher: finite,
  cum_trace: finite,
  iterations: finite.int(),
  converged: finite.int(),
});

/** One row of a sweep directory's sweep.csv (fixed columns only). */
export const sweepFixed = z.object({
  prior_index: finite.int().nonnegative(),
  k: finite.int().nonnegative(),
  trace_fisher: finite,
  cum_trace: finite,
});

/** One row of a landscape CSV: two state axes plus the information value. */
export const landscapeRow = (axis1: string, axis2: string) =>
  z.object({
    [axis1]: finite,
    [axis2]: finite,
    trace_f: finite,
  });

/** One row of a comparison directory's compare.csv (fixed columns only). */
export const compareFixed = z.object({
  k: finite.int().nonnegative(),
  med_cum_trace_ca: finite,
  med_cum_trace_baseline: finite,
});

const arm = z.enum(["contact-aware", "baseline"]);

/** The comparison report.json written next to compare.csv. */
export const compareReport = z.object({
  scenario: z.string(),
  n_seeds: z.number().int().positive(),
  k_max: z.number().int().positive(),
  final_median_pct_err: z.record(arm, z.record(z.string(), finite)),
  final_median_cum_trace: z.record(arm, finite),
  n_ca_better: z.number().int().nonnegative(),
  n_ties: z.number().int().nonnegative(),
  sign_test_p: z.number().min(0).max(1),
});

/** The run directory's config.json, reduced to what figures need. */
export const runConfig = z.object({
  k_max: z.number().int().positive(),
  seed: z.number().int(),
  engine: z.object({ mode: z.string() }),
  scenario: z.object({
    name: z.string(),
    params: z.array(z.string()).nonempty(),
    true_params: z.record(z.string(), finite),
  }),
});

/** The sweep directory's summary.json, reduced to what figures need. */
export const sweepSummary = z.object({
  scenario: z.string(),
  k_max: z.number().int().positive(),
  priors: z.array(z.array(finite)).nonempty(),
});

export type CompareReport = z.infer<typeof compareReport>;
export type RunConfig = z.infer<typeof runConfig>;
export type SweepSummary = z.infer<typeof sweepSummary>;

/** Physical units for axis labels, keyed by parameter column name. */
export const PARAM_UNITS: Record<string, string> = {
  mass: "kg",
  friction_coeff: "",
  stiffness: "N/m",
  damping: "N s/m",
  length: "m",
  width: "m",
};

export function unitSuffix(param: string): string {
  const u = PARAM_UNITS[param];
  return u ? ` (${u})` : "";
}
