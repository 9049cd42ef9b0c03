/** Anchoring decay figure: interface cos^2 / sin^2 statistics against eps, log-log. */

import { SweepRow } from "./csv";
import { logLogSlope, SlopeFit } from "./fit";
import { ChartSpec, renderChart, Series } from "./svg";

export interface CaseFit {
  eps: number[];
  values: number[];
  stat: "mean_cos2" | "mean_sin2";
  fit: SlopeFit;
}

export interface AnchoringSidecar {
  schema: string;
  cases: Record<string, CaseFit>;
}

export interface Figure {
  svg: string;
  sidecar: AnchoringSidecar;
}

const CASE_STAT: Record<string, "mean_cos2" | "mean_sin2"> = {
  A: "mean_cos2",
  B: "mean_sin2",
};

export function buildAnchoringFigure(rows: SweepRow[]): Figure {
  const present = rows.filter((r) => r.scenario === "anchoring");
  if (present.length === 0) {
    throw new Error("no anchoring rows in the CSV");
  }
  const cases: Record<string, CaseFit> = {};
  const series: Series[] = [];
  const colors: Record<string, string> = { A: "#1f6fb2", B: "#b2571f" };
  const annotations: string[] = [];
  for (const tag of Object.keys(CASE_STAT)) {
    const sel = present
      .filter((r) => r.case_tag === tag)
      .sort((a, b) => b.eps - a.eps);
    if (sel.length === 0) continue;
    const stat = CASE_STAT[tag];
    const vals = sel.map((r) => {
      const v = r[stat];
      if (v === null || v === undefined) {
        throw new Error(`missing column value: ${stat}`);
      }
      return v as number;
    });
    const eps = sel.map((r) => r.eps);
    const fit = logLogSlope(eps, vals);
    cases[tag] = { eps, values: vals, stat, fit };
    series.push({
      label: `case ${tag}: ${stat}`,
      color: colors[tag] ?? "#333",
      points: eps.map((e, i) => [e, Math.max(vals[i], 1e-300)] as [number, number]),
    });
    annotations.push(`case ${tag} decay slope: ${fit.slope.toFixed(3)}`);
  }
  const spec: ChartSpec = {
    title: "interface anchoring statistics vs eps",
    xLabel: "eps (log scale)",
    yLabel: "interface average (log scale)",
    xLog: true,
    yLog: true,
    series,
    annotations,
  };
  return {
    svg: renderChart(spec),
    sidecar: { schema: "anchoring-decay-v1", cases },
  };
}
