export { parseDataCsv, parseSummaryCsv, schemesIn } from "./csv.js";
export type { IterationRow, SummaryRow } from "./csv.js";
export { runningMean, schemeSeries } from "./series.js";
export type { Series } from "./series.js";
export { plotCompletionCurves, plotImprovementSummary } from "./plot.js";
export { renderBarChart, renderLineChart, SCHEME_COLORS } from "./svg.js";
