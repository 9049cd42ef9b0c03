import * as fs from "fs";
import * as path from "path";
import { describe, expect, it } from "vitest";
import { parseSweepCsv, SCHEMA_VERSION, SWEEP_COLUMNS } from "../src/csv";
import { buildAnchoringFigure } from "../src/anchoring";
import { logLogSlope } from "../src/fit";

const FIXTURES = path.join(__dirname, "fixtures");
const anchoringCsv = fs.readFileSync(path.join(FIXTURES, "anchoring", "sweep.csv"), "utf8");

function syntheticAnchoringCsv(points: Array<[number, number, number]>): string {
  const header = SWEEP_COLUMNS.join(",");
  const rows: string[] = [];
  for (const [eps, cos2, sin2] of points) {
    for (const tag of ["A", "B"]) {
      const cells = SWEEP_COLUMNS.map((c) => {
        switch (c) {
          case "schema": return SCHEMA_VERSION;
          case "scenario": return "anchoring";
          case "case_tag": return tag;
          case "eps": return String(eps);
          case "mean_cos2": return String(tag === "A" ? cos2 : 1 - sin2);
          case "mean_sin2": return String(tag === "A" ? 1 - cos2 : sin2);
          case "converged": return "true";
          case "deficit_kind": return "";
          default: return "0";
        }
      });
      rows.push(cells.join(","));
    }
  }
  return [header, ...rows].join("\n") + "\n";
}

describe("logLogSlope", () => {
  it("recovers the decay exponent of a power law", () => {
    const fit = logLogSlope([0.08, 0.04, 0.02], [0.08 ** 2, 0.04 ** 2, 0.02 ** 2]);
    expect(fit.slope).toBeCloseTo(2.0, 10);
  });

  it("constant columns give slope about zero", () => {
    const fit = logLogSlope([0.08, 0.04, 0.02], [0.5, 0.5, 0.5]);
    expect(Math.abs(fit.slope)).toBeLessThanOrEqual(1e-12);
  });

  it("values growing as eps shrinks give a negative slope", () => {
    const fit = logLogSlope([0.08, 0.04, 0.02], [0.1, 0.2, 0.4]);
    expect(fit.slope).toBeLessThan(0);
  });
});

describe("buildAnchoringFigure", () => {
  it("fits a decaying slope on monotone synthetic data", () => {
    const rows = parseSweepCsv(syntheticAnchoringCsv([
      [0.08, 0.04, 0.05], [0.04, 0.02, 0.024], [0.02, 0.01, 0.012],
    ]));
    const fig = buildAnchoringFigure(rows);
    expect(fig.sidecar.cases.A.fit.slope).toBeGreaterThan(0);
    expect(fig.sidecar.cases.B.fit.slope).toBeGreaterThan(0);
    expect(fig.svg).toContain("decay slope");
  });

  it("case A decay slope is at least 0.5 on the real acceptance sweep", () => {
    const rows = parseSweepCsv(anchoringCsv);
    const fig = buildAnchoringFigure(rows);
    expect(fig.sidecar.cases.A.stat).toBe("mean_cos2");
    expect(fig.sidecar.cases.A.fit.slope).toBeGreaterThanOrEqual(0.5);
    expect(fig.sidecar.cases.B.fit.slope).toBeGreaterThanOrEqual(0.5);
  });

  it("names a missing anchoring column", () => {
    const rows = parseSweepCsv(anchoringCsv).map((r) => ({ ...r, mean_cos2: null }));
    expect(() => buildAnchoringFigure(rows as never)).toThrow(/missing column value: mean_cos2/);
  });

  it("errors when no anchoring rows exist", () => {
    const rows = parseSweepCsv(anchoringCsv).filter((r) => r.scenario !== "anchoring");
    expect(() => buildAnchoringFigure(rows)).toThrow(/no anchoring rows/);
  });
});
