/** Typed parsing of the solver's sweep.csv with strict schema validation. */

export const SCHEMA_VERSION = "ericksen-sweep-v1";

export const SWEEP_COLUMNS = [
  "schema", "scenario", "case_tag", "eps", "seed", "nx", "ny", "nz", "h",
  "iterations", "converged", "grad_norm",
  "dirichlet_s", "potential", "frank", "iso_director", "coupling", "total",
  "eps_times_total", "surface_estimate", "o1_estimate",
  "perimeter_levelset", "perimeter_coarea", "mean_cos2", "mean_sin2",
  "volume", "deficit", "deficit_kind", "asymmetry",
  "comparison_energy", "trace_energy",
] as const;

const NUMERIC = new Set([
  "eps", "seed", "nx", "ny", "nz", "h", "iterations", "grad_norm",
  "dirichlet_s", "potential", "frank", "iso_director", "coupling", "total",
  "eps_times_total", "surface_estimate", "o1_estimate",
  "perimeter_levelset", "perimeter_coarea", "mean_cos2", "mean_sin2",
  "volume", "deficit", "asymmetry", "comparison_energy", "trace_energy",
]);

export interface SweepRow {
  schema: string;
  scenario: string;
  case_tag: string;
  eps: number;
  eps_times_total: number;
  surface_estimate: number;
  o1_estimate: number;
  mean_cos2: number | null;
  mean_sin2: number | null;
  deficit: number | null;
  asymmetry: number | null;
  [key: string]: string | number | boolean | null;
}

export class SchemaError extends Error {}

export function parseSweepCsv(text: string): SweepRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV");
  }
  const header = lines[0].split(",");
  const expected = SWEEP_COLUMNS as readonly string[];
  const missing = expected.filter((c) => !header.includes(c));
  const extra = header.filter((c) => !expected.includes(c));
  if (missing.length > 0 || extra.length > 0 || header.length !== expected.length) {
    const parts = [];
    if (missing.length > 0) parts.push(`missing columns: ${missing.join(", ")}`);
    if (extra.length > 0) parts.push(`unknown columns: ${extra.join(", ")}`);
    if (parts.length === 0) parts.push("column order mismatch");
    throw new SchemaError(`sweep CSV schema mismatch: ${parts.join("; ")}`);
  }
  for (let i = 0; i < header.length; i++) {
    if (header[i] !== expected[i]) {
      throw new SchemaError(
        `sweep CSV schema mismatch: column ${i} is '${header[i]}', expected '${expected[i]}'`,
      );
    }
  }
  const rows: SweepRow[] = [];
  for (const line of lines.slice(1)) {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new SchemaError(`row has ${cells.length} cells, expected ${header.length}`);
    }
    const row: Record<string, string | number | boolean | null> = {};
    header.forEach((col, j) => {
      const raw = cells[j];
      if (raw === "") {
        row[col] = null;
      } else if (col === "converged") {
        row[col] = raw === "true";
      } else if (NUMERIC.has(col)) {
        const v = Number(raw);
        if (Number.isNaN(v)) {
          throw new SchemaError(`non-numeric value '${raw}' in column ${col}`);
        }
        row[col] = v;
      } else {
        row[col] = raw;
      }
    });
    if (row["schema"] !== SCHEMA_VERSION) {
      throw new SchemaError(
        `unknown schema version '${row["schema"]}', expected '${SCHEMA_VERSION}'`,
      );
    }
    rows.push(row as unknown as SweepRow);
  }
  return rows;
}
