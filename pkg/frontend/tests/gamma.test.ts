import * as fs from "fs";
import * as path from "path";
import { describe, expect, it } from "vitest";
import { parseSweepCsv, SCHEMA_VERSION, SWEEP_COLUMNS } from "../src/csv";
import { buildGammaFigure } from "../src/gamma";
import { serializeSidecar } from "../src/cli";

const FIXTURES = path.join(__dirname, "fixtures");
const gammaCsv = fs.readFileSync(path.join(FIXTURES, "gamma", "sweep.csv"), "utf8");
const ALPHA0 = 1 / 3;

function syntheticCsv(points: Array<[number, number]>): string {
  const header = SWEEP_COLUMNS.join(",");
  const rows = points.map(([eps, epsE]) => {
    const cells = SWEEP_COLUMNS.map((c) => {
      switch (c) {
        case "schema": return SCHEMA_VERSION;
        case "scenario": return "flat_interface";
        case "case_tag": return "C";
        case "eps": return String(eps);
        case "eps_times_total": return String(epsE);
        case "surface_estimate": return String(ALPHA0);
        case "converged": return "true";
        case "deficit_kind": return "";
        default: return "0";
      }
    });
    return cells.join(",");
  });
  return [header, ...rows].join("\n") + "\n";
}

describe("buildGammaFigure", () => {
  it("emits a nonempty figure for a 3-row synthetic CSV", () => {
    const rows = parseSweepCsv(syntheticCsv([[0.08, 0.36], [0.04, 0.35], [0.02, 0.34]]));
    const fig = buildGammaFigure(rows, ALPHA0, 1.0);
    expect(fig.svg.length).toBeGreaterThan(500);
    expect(fig.svg).toContain("<svg");
    expect(fig.svg).toContain("polyline");
  });

  it("reference line equals alpha0 * area exactly", () => {
    const rows = parseSweepCsv(syntheticCsv([[0.08, 0.36], [0.04, 0.35], [0.02, 0.34]]));
    const fig = buildGammaFigure(rows, ALPHA0, 2.0);
    expect(fig.sidecar.reference).toBe(ALPHA0 * 2.0);
  });

  it("rejects fewer than 3 rows", () => {
    const rows = parseSweepCsv(syntheticCsv([[0.08, 0.36], [0.04, 0.35]]));
    expect(() => buildGammaFigure(rows, ALPHA0, 1.0)).toThrow(/at least 3 eps rows/);
  });

  it("sidecar gap matches the CSV-derived value within 1e-12 on the real sweep", () => {
    const rows = parseSweepCsv(gammaCsv);
    const area = rows[0].surface_estimate / ALPHA0;
    const fig = buildGammaFigure(rows, ALPHA0, area);
    const smallest = [...rows].sort((a, b) => a.eps - b.eps)[0];
    const expected = smallest.eps_times_total - ALPHA0 * area;
    expect(Math.abs(fig.sidecar.gap_at_smallest_eps - expected)).toBeLessThanOrEqual(1e-12);
    // the converged sweep sits within 5% of the surface-energy reference
    expect(Math.abs(fig.sidecar.relative_gap_at_smallest_eps)).toBeLessThanOrEqual(0.05);
  });

  it("same CSV in, byte-identical sidecar out", () => {
    const rows1 = parseSweepCsv(gammaCsv);
    const rows2 = parseSweepCsv(gammaCsv);
    const s1 = serializeSidecar(buildGammaFigure(rows1, ALPHA0, 0.0625).sidecar);
    const s2 = serializeSidecar(buildGammaFigure(rows2, ALPHA0, 0.0625).sidecar);
    expect(s1).toBe(s2);
  });

  it("every plotted number originates in the CSV", () => {
    const rows = parseSweepCsv(gammaCsv);
    const fig = buildGammaFigure(rows, ALPHA0, 0.0625);
    expect(fig.sidecar.eps).toEqual(rows.map((r) => r.eps));
    expect(fig.sidecar.eps_times_total).toEqual(rows.map((r) => r.eps_times_total));
  });
});
