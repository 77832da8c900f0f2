/**
 * Figure CLI.  Reads harness output directories and writes SVG files.
 *
 *   node dist/cli.js --input sample --kind all --out figures
 *
 * Kinds and what they expect under --input:
 *   convergence  a run directory (record.csv + config.json)
 *   robustness   a sweep directory (sweep.csv + summary.json)
 *   landscape    a landscape CSV file
 *   comparison   a comparison directory (compare.csv + report.json)
 *   all          a directory containing run/, sweep/, landscape.csv, compare/
 */

import { mkdirSync, writeFileSync } from "fs";
import { join, resolve } from "path";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import {
  loadCompare,
  loadLandscape,
  loadRun,
  loadSweep,
} from "./load.js";
import {
  comparisonFigure,
  convergenceFigure,
  landscapeFigure,
  robustnessFigure,
} from "./figures.js";
import { renderSvg } from "./render.js";

const KINDS = [
  "convergence",
  "robustness",
  "landscape",
  "comparison",
  "all",
] as const;
type Kind = (typeof KINDS)[number];

export function buildFigure(kind: Exclude<Kind, "all">, input: string): string {
  switch (kind) {
    case "convergence":
      return renderSvg(convergenceFigure(loadRun(input)));
    case "robustness":
      return renderSvg(robustnessFigure(loadSweep(input)));
    case "landscape":
      return renderSvg(landscapeFigure(loadLandscape(input), input));
    case "comparison":
      return renderSvg(comparisonFigure(loadCompare(input)));
  }
}

export function writeFigures(kind: Kind, input: string, out: string): string[] {
  mkdirSync(out, { recursive: true });
  const jobs: [Exclude<Kind, "all">, string][] =
    kind === "all"
      ? [
          ["convergence", join(input, "run")],
          ["robustness", join(input, "sweep")],
          ["landscape", join(input, "landscape.csv")],
          ["comparison", join(input, "compare")],
        ]
      : [[kind, input]];
  const written: string[] = [];
  for (const [k, src] of jobs) {
    const path = join(out, `${k}.svg`);
    writeFileSync(path, buildFigure(k, src));
    written.push(path);
  }
  return written;
}

export function main(argv: string[]): number {
  const args = yargs(argv)
    .usage("$0 --input [dir] --kind [kind] --out [dir]")
    .string("input")
    .describe("input", "Run/sweep/comparison directory or landscape CSV")
    .demandOption("input")
    .choices("kind", KINDS)
    .describe("kind", "Which figure to build")
    .default("kind", "all" as Kind)
    .string("out")
    .describe("out", "Directory that receives the SVG files")
    .default("out", "figures")
    .strict()
    .help()
    .parseSync(hideBin(argv));
  try {
    const written = writeFigures(
      args.kind as Kind,
      resolve(args.input),
      resolve(args.out),
    );
    for (const p of written) console.log(`wrote ${p}`);
    return 0;
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    return 1;
  }
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("cli.js")) {
  process.exit(main(process.argv));
}
