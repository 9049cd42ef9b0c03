#!/usr/bin/env node
/** Usage: plot_anchoring --csv sweep.csv --out fig.svg */

import * as fs from "fs";
import { parseFlags, writeFigure } from "./cli";
import { parseSweepCsv } from "./csv";
import { buildAnchoringFigure } from "./anchoring";

function main(): number {
  try {
    const flags = parseFlags(process.argv.slice(2), ["csv", "out"]);
    const rows = parseSweepCsv(fs.readFileSync(flags.csv, "utf8"));
    const fig = buildAnchoringFigure(rows);
    const sp = writeFigure(flags.out, fig.svg, fig.sidecar);
    console.log(`wrote ${flags.out} and ${sp}`);
    for (const [tag, cf] of Object.entries(fig.sidecar.cases)) {
      console.log(`case ${tag}: ${cf.stat} decay slope ${cf.fit.slope.toFixed(4)}`);
    }
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

process.exitCode = main();
