import * as fs from "fs";
import * as path from "path";
import { describe, expect, it } from "vitest";
import { parseSweepCsv, SchemaError, SWEEP_COLUMNS } from "../src/csv";

const FIXTURES = path.join(__dirname, "fixtures");
const gammaCsv = fs.readFileSync(path.join(FIXTURES, "gamma", "sweep.csv"), "utf8");

describe("parseSweepCsv", () => {
  it("parses the solver CSV with typed columns", () => {
    const rows = parseSweepCsv(gammaCsv);
    expect(rows.length).toBe(3);
    expect(rows[0].eps).toBeTypeOf("number");
    expect(rows[0].eps_times_total).toBeTypeOf("number");
    expect(rows[0].case_tag).toBe("C");
    expect(rows.map((r) => r.eps)).toEqual([0.08, 0.04, 0.02]);
  });

  it("keeps empty cells as nulls", () => {
    const rows = parseSweepCsv(gammaCsv);
    expect(rows[0].deficit).toBeNull();
  });

  it("rejects unknown schema versions", () => {
    const tampered = gammaCsv.replace(/ericksen-sweep-v1/g, "ericksen-sweep-v999");
    expect(() => parseSweepCsv(tampered)).toThrow(SchemaError);
    expect(() => parseSweepCsv(tampered)).toThrow(/unknown schema version/);
  });

  it("names missing columns", () => {
    const lines = gammaCsv.split("\n");
    const cols = lines[0].split(",");
    const dropIdx = cols.indexOf("eps_times_total");
    const drop = (line: string) =>
      line.split(",").filter((_, i) => i !== dropIdx).join(",");
    const mutated = lines.map((l) => (l ? drop(l) : l)).join("\n");
    expect(() => parseSweepCsv(mutated)).toThrow(/missing columns: eps_times_total/);
  });

  it("rejects reordered columns", () => {
    const lines = gammaCsv.split("\n");
    const cols = lines[0].split(",");
    [cols[3], cols[4]] = [cols[4], cols[3]];
    const mutated = [cols.join(","), ...lines.slice(1)].join("\n");
    expect(() => parseSweepCsv(mutated)).toThrow(SchemaError);
  });

  it("column list matches the documented schema", () => {
    expect(gammaCsv.split("\n")[0]).toBe(SWEEP_COLUMNS.join(","));
  });
});
