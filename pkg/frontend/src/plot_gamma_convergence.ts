#!/usr/bin/env node
/** Usage: plot_gamma_convergence --csv sweep.csv --out fig.svg --alpha0 V --area V */

import * as fs from "fs";
import { parseFlags, sidecarPath, writeFigure } from "./cli";
import { parseSweepCsv } from "./csv";
import { buildGammaFigure } from "./gamma";

function main(): number {
  try {
    const flags = parseFlags(process.argv.slice(2), ["csv", "out", "alpha0", "area"]);
    const rows = parseSweepCsv(fs.readFileSync(flags.csv, "utf8"));
    const fig = buildGammaFigure(rows, Number(flags.alpha0), Number(flags.area));
    const sp = writeFigure(flags.out, fig.svg, fig.sidecar);
    console.log(`wrote ${flags.out} and ${sp}`);
    console.log(`gap at smallest eps: ${fig.sidecar.gap_at_smallest_eps}`);
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

process.exitCode = main();
