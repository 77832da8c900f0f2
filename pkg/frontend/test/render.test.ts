import { existsSync, mkdtempSync, readFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { fileURLToPath } from "url";
import { describe, expect, it } from "vitest";
import { buildFigure, writeFigures } from "../src/cli.js";

const SAMPLE = fileURLToPath(new URL("../sample", import.meta.url));
const KINDS = ["convergence", "robustness", "landscape", "comparison"] as const;

function inputFor(kind: (typeof KINDS)[number]): string {
  switch (kind) {
    case "convergence":
      return join(SAMPLE, "run");
    case "robustness":
      return join(SAMPLE, "sweep");
    case "landscape":
      return join(SAMPLE, "landscape.csv");
    case "comparison":
      return join(SAMPLE, "compare");
  }
}

describe("svg rendering", () => {
  it("regenerates all four figure kinds from the bundled sample", () => {
    for (const kind of KINDS) {
      const svg = buildFigure(kind, inputFor(kind));
      expect(svg.startsWith("<svg")).toBe(true);
      expect(svg).toContain("</svg>");
    }
  });

  it("renders the same bytes on repeated runs", () => {
    for (const kind of KINDS) {
      const a = buildFigure(kind, inputFor(kind));
      const b = buildFigure(kind, inputFor(kind));
      expect(a).toBe(b);
    }
  });

  it("keeps the unit-bearing axis labels in the output", () => {
    const svg = buildFigure("landscape", inputFor("landscape"));
    expect(svg).toContain("v_n (m/s)");
    expect(svg).toContain("v_t (m/s)");
  });

  it("writes one file per kind in 'all' mode", () => {
    const out = mkdtempSync(join(tmpdir(), "figout-"));
    const written = writeFigures("all", SAMPLE, out);
    expect(written.length).toBe(4);
    for (const kind of KINDS) {
      const path = join(out, `${kind}.svg`);
      expect(existsSync(path)).toBe(true);
      expect(readFileSync(path, "utf8").startsWith("<svg")).toBe(true);
    }
  });

  it("propagates the named-column error through the figure path", () => {
    expect(() => buildFigure("convergence", join(SAMPLE, "sweep"))).toThrow();
  });
});
