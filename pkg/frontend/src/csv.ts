/** Parsing for the engine's data/summary CSV schemas. */

export interface IterationRow {
  run: number;
  iteration: number;
  scheme: string;
  completionTime: number;
}

export interface SummaryRow {
  scheme: string;
  mean: number;
  std: number;
  improvementVsGcsc: number | null;
}

const DATA_COLUMNS = ["run", "iteration", "scheme", "completion_time"];
const SUMMARY_COLUMNS = ["scheme", "mean", "std", "improvement_vs_gcsc"];

interface Table {
  header: string[];
  rows: string[][];
}

function parseTable(text: string): Table {
  const lines = text
    .split(/\r?\n/)
    .filter((line) => line.trim().length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV");
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line) => line.split(","));
  return { header, rows };
}

function requireColumns(header: string[], required: string[]): Map<string, number> {
  const index = new Map(header.map((name, i) => [name, i]));
  const missing = required.filter((name) => !index.has(name));
  if (missing.length > 0) {
    throw new Error(
      `CSV is missing column(s) ${missing.join(", ")}; got header: ${header.join(",")}`,
    );
  }
  return index;
}

export function parseDataCsv(text: string): IterationRow[] {
  const { header, rows } = parseTable(text);
  const col = requireColumns(header, DATA_COLUMNS);
  return rows.map((cells, i) => {
    const row: IterationRow = {
      run: Number(cells[col.get("run")!]),
      iteration: Number(cells[col.get("iteration")!]),
      scheme: cells[col.get("scheme")!],
      completionTime: Number(cells[col.get("completion_time")!]),
    };
    if (!Number.isFinite(row.iteration) || !Number.isFinite(row.completionTime)) {
      throw new Error(`unparseable numeric field on data row ${i + 2}`);
    }
    return row;
  });
}

export function parseSummaryCsv(text: string): SummaryRow[] {
  const { header, rows } = parseTable(text);
  const col = requireColumns(header, SUMMARY_COLUMNS);
  return rows.map((cells, i) => {
    const rawImprovement = cells[col.get("improvement_vs_gcsc")!];
    const row: SummaryRow = {
      scheme: cells[col.get("scheme")!],
      mean: Number(cells[col.get("mean")!]),
      std: Number(cells[col.get("std")!]),
      improvementVsGcsc: rawImprovement === "" ? null : Number(rawImprovement),
    };
    if (!Number.isFinite(row.mean) || !Number.isFinite(row.std)) {
      throw new Error(`unparseable numeric field on summary row ${i + 2}`);
    }
    return row;
  });
}

export function schemesIn(rows: IterationRow[]): string[] {
  const seen: string[] = [];
  for (const row of rows) {
    if (!seen.includes(row.scheme)) seen.push(row.scheme);
  }
  return seen;
}
