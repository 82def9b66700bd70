#!/usr/bin/env node
/**
 * Render gcsim CSV outputs as SVG figures.
 *
 *   gcsim-plot --data results/data.csv --summary results/summary.csv \
 *              --out figures/ [--window N]
 *
 * --data yields completion.svg (one running-mean curve per scheme);
 * --summary yields improvement.svg (mean +- std bars, GC-DC annotation).
 * Without --window the curves use the cumulative running average.
 */

import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { parseArgs } from "node:util";

import { plotCompletionCurves, plotImprovementSummary } from "./plot.js";

export function main(argv: string[]): number {
  const { values } = parseArgs({
    args: argv,
    options: {
      data: { type: "string" },
      summary: { type: "string" },
      out: { type: "string", default: "." },
      window: { type: "string" },
    },
  });
  if (!values.data && !values.summary) {
    console.error("nothing to do: pass --data and/or --summary");
    return 2;
  }
  let window: number | undefined;
  if (values.window !== undefined) {
    window = Number(values.window);
    if (!Number.isInteger(window) || window < 1) {
      console.error(`--window must be a positive integer, got ${values.window}`);
      return 2;
    }
  }
  const out = values.out!;
  mkdirSync(out, { recursive: true });
  try {
    if (values.data) {
      const svg = plotCompletionCurves(readFileSync(values.data, "utf8"), window);
      const path = join(out, "completion.svg");
      writeFileSync(path, svg);
      console.log(`wrote ${path}`);
    }
    if (values.summary) {
      const svg = plotImprovementSummary(readFileSync(values.summary, "utf8"));
      const path = join(out, "improvement.svg");
      writeFileSync(path, svg);
      console.log(`wrote ${path}`);
    }
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    return 1;
  }
  return 0;
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
