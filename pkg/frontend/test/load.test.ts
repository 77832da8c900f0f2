import { mkdtempSync, readFileSync, writeFileSync, cpSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { fileURLToPath } from "url";
import { describe, expect, it } from "vitest";
import {
  loadCompare,
  loadLandscape,
  loadRun,
  loadSweep,
  parseCsv,
} from "../src/load.js";

const SAMPLE = fileURLToPath(new URL("../sample", import.meta.url));

function copyDir(src: string): string {
  const dst = mkdtempSync(join(tmpdir(), "figtest-"));
  cpSync(src, dst, { recursive: true });
  return dst;
}

/* Drop one column from a CSV, header and body. */
function dropColumn(path: string, name: string): void {
  const lines = readFileSync(path, "utf8").trim().split("\n");
  const idx = lines[0].split(",").indexOf(name);
  expect(idx).toBeGreaterThanOrEqual(0);
  const out = lines
    .map((ln) => {
      const cells = ln.split(",");
      cells.splice(idx, 1);
      return cells.join(",");
    })
    .join("\n");
  writeFileSync(path, out + "\n");
}

describe("run loader", () => {
  it("types every record row from the bundled sample", () => {
    const run = loadRun(join(SAMPLE, "run"));
    expect(run.params).toEqual(["friction_coeff"]);
    expect(run.rows.length).toBe(run.config.k_max);
    for (const r of run.rows) {
      expect(typeof r.k).toBe("number");
      expect(typeof r.cum_trace).toBe("number");
      expect(typeof r.theta_friction_coeff).toBe("number");
      expect(typeof r.sigma_friction_coeff).toBe("number");
    }
    // cumulative information never decreases
    const cum = run.rows.map((r) => r.cum_trace as number);
    for (let i = 1; i < cum.length; i++) {
      expect(cum[i]).toBeGreaterThanOrEqual(cum[i - 1]);
    }
  });

  it("names the missing column when record.csv is truncated", () => {
    const dir = copyDir(join(SAMPLE, "run"));
    dropColumn(join(dir, "record.csv"), "cum_trace");
    expect(() => loadRun(dir)).toThrowError(/missing column "cum_trace"/);
  });

  it("names the missing per-parameter column", () => {
    const dir = copyDir(join(SAMPLE, "run"));
    dropColumn(join(dir, "record.csv"), "sigma_friction_coeff");
    expect(() => loadRun(dir)).toThrowError(
      /missing column "sigma_friction_coeff"/,
    );
  });

  it("points at the bad cell when a value is not numeric", () => {
    const dir = copyDir(join(SAMPLE, "run"));
    const path = join(dir, "record.csv");
    const lines = readFileSync(path, "utf8").trim().split("\n");
    const cells = lines[2].split(",");
    cells[1] = "oops";
    lines[2] = cells.join(",");
    writeFileSync(path, lines.join("\n") + "\n");
    expect(() => loadRun(dir)).toThrowError(/row 2, column "score"/);
  });
});

describe("sweep loader", () => {
  it("recovers the prior grid from the bundled sample", () => {
    const sweep = loadSweep(join(SAMPLE, "sweep"));
    expect(sweep.params).toEqual(["friction_coeff"]);
    const priors = new Set(sweep.rows.map((r) => r.prior_index));
    expect(priors.size).toBe(sweep.summary.priors.length);
    expect(sweep.rows.length).toBe(priors.size * sweep.summary.k_max);
  });

  it("names the missing prior column", () => {
    const dir = copyDir(join(SAMPLE, "sweep"));
    const path = join(dir, "sweep.csv");
    const text = readFileSync(path, "utf8")
      .replace("prior_friction_coeff", "prior2_friction_coeff");
    writeFileSync(path, text);
    expect(() => loadSweep(dir)).toThrowError(
      /missing column "prior_<parameter>"/,
    );
  });
});

describe("landscape loader", () => {
  it("reads axes from the header", () => {
    const land = loadLandscape(join(SAMPLE, "landscape.csv"));
    expect(land.axes).toEqual(["v_n", "v_t"]);
    expect(land.rows.length).toBe(41 * 41);
    expect(land.rows.every((r) => r.value >= 0)).toBe(true);
  });

  it("names the missing value column", () => {
    const dir = copyDir(SAMPLE);
    dropColumn(join(dir, "landscape.csv"), "trace_f");
    expect(() => loadLandscape(join(dir, "landscape.csv"))).toThrowError(
      /missing column "trace_f"/,
    );
  });
});

describe("comparison loader", () => {
  it("pairs both arms for every parameter", () => {
    const cmp = loadCompare(join(SAMPLE, "compare"));
    expect(cmp.params).toEqual(["friction_coeff"]);
    expect(cmp.report.n_seeds).toBeGreaterThan(1);
    expect(cmp.report.sign_test_p).toBeGreaterThanOrEqual(0);
    expect(cmp.report.sign_test_p).toBeLessThanOrEqual(1);
    expect(cmp.rows.length).toBe(cmp.report.k_max);
  });

  it("names the missing baseline column", () => {
    const dir = copyDir(join(SAMPLE, "compare"));
    dropColumn(join(dir, "compare.csv"), "med_cum_trace_baseline");
    expect(() => loadCompare(dir)).toThrowError(
      /missing column "med_cum_trace_baseline"/,
    );
  });
});

describe("csv parser", () => {
  it("reports the file and row for malformed csv", () => {
    const dir = mkdtempSync(join(tmpdir(), "figtest-"));
    const path = join(dir, "bad.csv");
    writeFileSync(path, 'a,b\n1,"2\n');
    expect(() => parseCsv(path)).toThrowError(/bad\.csv/);
  });
});
