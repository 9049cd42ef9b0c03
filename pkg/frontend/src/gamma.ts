/** Convergence figure: eps * E against the surface-energy reference alpha0 * area. */

import { SweepRow } from "./csv";
import { ChartSpec, renderChart } from "./svg";

export interface GammaSidecar {
  schema: string;
  alpha0: number;
  area: number;
  reference: number;
  eps: number[];
  eps_times_total: number[];
  gap_at_smallest_eps: number;
  relative_gap_at_smallest_eps: number;
}

export interface Figure {
  svg: string;
  sidecar: GammaSidecar;
}

export function buildGammaFigure(rows: SweepRow[], alpha0: number, area: number): Figure {
  if (rows.length < 3) {
    throw new Error(`need at least 3 eps rows for a convergence plot, got ${rows.length}`);
  }
  const sorted = [...rows].sort((a, b) => b.eps - a.eps);
  const eps = sorted.map((r) => r.eps);
  const vals = sorted.map((r) => {
    if (r.eps_times_total === null || r.eps_times_total === undefined) {
      throw new Error("missing column value: eps_times_total");
    }
    return r.eps_times_total;
  });
  const reference = alpha0 * area;
  const smallest = sorted[sorted.length - 1];
  const gap = smallest.eps_times_total - reference;

  const sidecar: GammaSidecar = {
    schema: "gamma-convergence-v1",
    alpha0,
    area,
    reference,
    eps,
    eps_times_total: vals,
    gap_at_smallest_eps: gap,
    relative_gap_at_smallest_eps: gap / reference,
  };

  const spec: ChartSpec = {
    title: "eps * E along the sweep",
    xLabel: "eps (log scale)",
    yLabel: "eps * E",
    xLog: true,
    series: [{
      label: "minimized energy",
      color: "#1f6fb2",
      points: eps.map((e, i) => [e, vals[i]] as [number, number]),
    }],
    hline: { value: reference, label: `alpha0 * area = ${reference.toPrecision(6)}` },
    annotations: [
      `gap at eps=${smallest.eps}: ${gap.toExponential(3)}`,
      `relative: ${(100 * gap / reference).toFixed(3)}%`,
    ],
  };
  return { svg: renderChart(spec), sidecar };
}
