/** Per-scheme iteration series and running-mean smoothing. */

import { IterationRow } from "./csv.js";

export interface Series {
  scheme: string;
  iterations: number[];
  values: number[];
}

/** Mean completion time per iteration (averaged over runs), ascending. */
export function schemeSeries(rows: IterationRow[], scheme: string): Series {
  const byIteration = new Map<number, { sum: number; count: number }>();
  for (const row of rows) {
    if (row.scheme !== scheme) continue;
    const cell = byIteration.get(row.iteration) ?? { sum: 0, count: 0 };
    cell.sum += row.completionTime;
    cell.count += 1;
    byIteration.set(row.iteration, cell);
  }
  const iterations = [...byIteration.keys()].sort((a, b) => a - b);
  return {
    scheme,
    iterations,
    values: iterations.map((t) => {
      const cell = byIteration.get(t)!;
      return cell.sum / cell.count;
    }),
  };
}

/**
 * Running mean. window === undefined gives the cumulative average (the
 * flat-converging curves of the comparison figures); window w >= 1 averages
 * the trailing w values, so w = 1 reproduces the input exactly.
 */
export function runningMean(values: number[], window?: number): number[] {
  if (window !== undefined) {
    if (!Number.isInteger(window) || window < 1) {
      throw new Error(`window must be a positive integer, got ${window}`);
    }
    return values.map((_, i) => {
      const start = Math.max(0, i - window + 1);
      const slice = values.slice(start, i + 1);
      return slice.reduce((a, b) => a + b, 0) / slice.length;
    });
  }
  const out: number[] = [];
  let sum = 0;
  values.forEach((v, i) => {
    sum += v;
    out.push(sum / (i + 1));
  });
  return out;
}
