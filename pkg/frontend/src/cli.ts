/** Shared flag parsing and deterministic sidecar serialization for the plot scripts. */

import * as fs from "fs";
import * as path from "path";

export interface Flags {
  [key: string]: string;
}

export function parseFlags(argv: string[], required: string[]): Flags {
  const flags: Flags = {};
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a.startsWith("--")) {
      const key = a.slice(2);
      const val = argv[i + 1];
      if (val === undefined || val.startsWith("--")) {
        throw new Error(`flag --${key} needs a value`);
      }
      flags[key] = val;
      i++;
    } else {
      throw new Error(`unexpected argument '${a}'`);
    }
  }
  for (const r of required) {
    if (!(r in flags)) {
      throw new Error(`missing required flag --${r}`);
    }
  }
  return flags;
}

export function sidecarPath(outPath: string): string {
  const ext = path.extname(outPath);
  return ext ? outPath.slice(0, -ext.length) + ".json" : outPath + ".json";
}

/** JSON with stable key order and a trailing newline: same input, same bytes. */
export function serializeSidecar(obj: unknown): string {
  return JSON.stringify(obj, null, 2) + "\n";
}

export function writeFigure(outPath: string, svg: string, sidecar: unknown): string {
  fs.mkdirSync(path.dirname(path.resolve(outPath)), { recursive: true });
  fs.writeFileSync(outPath, svg);
  const sp = sidecarPath(outPath);
  fs.writeFileSync(sp, serializeSidecar(sidecar));
  return sp;
}
