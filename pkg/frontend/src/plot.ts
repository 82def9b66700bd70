/** Figure assembly from engine CSV text. */

import { parseDataCsv, parseSummaryCsv, schemesIn } from "./csv.js";
import { runningMean, schemeSeries } from "./series.js";
import { Curve, renderBarChart, renderLineChart } from "./svg.js";

/**
 * One running-mean completion-time curve per scheme. ``window`` undefined
 * uses the cumulative average; window = 1 plots the raw per-iteration means.
 */
export function plotCompletionCurves(dataCsv: string, window?: number): string {
  const rows = parseDataCsv(dataCsv);
  if (rows.length === 0) throw new Error("data CSV has no rows");
  const curves: Curve[] = schemesIn(rows).map((scheme) => {
    const series = schemeSeries(rows, scheme);
    return {
      label: scheme,
      x: series.iterations,
      y: runningMean(series.values, window),
    };
  });
  const smoothing = window === undefined ? "running average" : `window ${window}`;
  return renderLineChart(curves, {
    title: `Per-iteration completion time (${smoothing})`,
    xLabel: "iteration",
    yLabel: "completion time (s)",
  });
}

/** Mean +- std bars per scheme, annotated with the GC-DC gain over GC-SC. */
export function plotImprovementSummary(summaryCsv: string): string {
  const rows = parseSummaryCsv(summaryCsv);
  if (rows.length === 0) throw new Error("summary CSV has no rows");
  const gcsc = rows.find((row) => row.scheme === "GC-SC");
  if (!gcsc) {
    throw new Error("summary CSV has no GC-SC row; cannot annotate improvement");
  }
  const gcdc = rows.find((row) => row.scheme === "GC-DC");
  let annotation: string | undefined;
  if (gcdc && gcdc.improvementVsGcsc !== null) {
    annotation = `GC-DC improves on GC-SC by ${(gcdc.improvementVsGcsc * 100).toFixed(0)}%`;
  }
  return renderBarChart(
    rows.map((row) => ({ label: row.scheme, mean: row.mean, std: row.std })),
    {
      title: "Mean per-iteration completion time",
      yLabel: "completion time (s)",
      annotation,
    },
  );
}
