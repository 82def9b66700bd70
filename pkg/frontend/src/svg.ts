/** Minimal deterministic SVG chart rendering (no DOM required). */

export const SCHEME_COLORS: Record<string, string> = {
  GC: "#d62728",
  "GC-SC": "#1f77b4",
  "GC-DC": "#2ca02c",
  LB: "#7f7f7f",
};

const FALLBACK_COLORS = ["#9467bd", "#8c564b", "#e377c2", "#bcbd22", "#17becf"];

export function colorFor(scheme: string, index: number): string {
  return SCHEME_COLORS[scheme] ?? FALLBACK_COLORS[index % FALLBACK_COLORS.length];
}

export interface Curve {
  label: string;
  x: number[];
  y: number[];
}

interface Frame {
  width: number;
  height: number;
  left: number;
  right: number;
  top: number;
  bottom: number;
}

const FRAME: Frame = { width: 720, height: 480, left: 70, right: 20, top: 40, bottom: 55 };

function niceTicks(lo: number, hi: number, count = 5): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = span / count / step;
  const factor = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const tick = step * factor;
  const start = Math.ceil(lo / tick) * tick;
  const ticks: number[] = [];
  for (let v = start; v <= hi + tick * 1e-9; v += tick) ticks.push(v);
  return ticks;
}

function fmt(v: number): string {
  if (Math.abs(v) >= 1000 || (Math.abs(v) < 0.01 && v !== 0)) return v.toExponential(1);
  return Number(v.toPrecision(4)).toString();
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderLineChart(
  curves: Curve[],
  opts: { title: string; xLabel: string; yLabel: string },
): string {
  if (curves.length === 0) throw new Error("no curves to draw");
  const f = FRAME;
  const xs = curves.flatMap((c) => c.x);
  const ys = curves.flatMap((c) => c.y);
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  const yLo = Math.min(0, ...ys);
  const yHi = Math.max(...ys);
  const xSpan = xHi - xLo || 1;
  const ySpan = yHi - yLo || 1;
  const px = (x: number) => f.left + ((x - xLo) / xSpan) * (f.width - f.left - f.right);
  const py = (y: number) => f.height - f.bottom - ((y - yLo) / ySpan) * (f.height - f.top - f.bottom);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${f.width}" height="${f.height}" viewBox="0 0 ${f.width} ${f.height}" font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${f.width}" height="${f.height}" fill="white"/>`);
  parts.push(
    `<text x="${f.width / 2}" y="20" text-anchor="middle" font-size="15">${esc(opts.title)}</text>`,
  );
  for (const t of niceTicks(xLo, xHi)) {
    const x = px(t);
    parts.push(`<line x1="${x}" y1="${f.height - f.bottom}" x2="${x}" y2="${f.height - f.bottom + 4}" stroke="black"/>`);
    parts.push(`<text x="${x}" y="${f.height - f.bottom + 17}" text-anchor="middle">${fmt(t)}</text>`);
  }
  for (const t of niceTicks(yLo, yHi)) {
    const y = py(t);
    parts.push(`<line x1="${f.left - 4}" y1="${y}" x2="${f.left}" y2="${y}" stroke="black"/>`);
    parts.push(`<line x1="${f.left}" y1="${y}" x2="${f.width - f.right}" y2="${y}" stroke="#e0e0e0"/>`);
    parts.push(`<text x="${f.left - 8}" y="${y + 4}" text-anchor="end">${fmt(t)}</text>`);
  }
  parts.push(
    `<line x1="${f.left}" y1="${f.top}" x2="${f.left}" y2="${f.height - f.bottom}" stroke="black"/>`,
    `<line x1="${f.left}" y1="${f.height - f.bottom}" x2="${f.width - f.right}" y2="${f.height - f.bottom}" stroke="black"/>`,
    `<text x="${(f.left + f.width - f.right) / 2}" y="${f.height - 12}" text-anchor="middle">${esc(opts.xLabel)}</text>`,
    `<text x="18" y="${(f.top + f.height - f.bottom) / 2}" text-anchor="middle" transform="rotate(-90 18 ${(f.top + f.height - f.bottom) / 2})">${esc(opts.yLabel)}</text>`,
  );
  curves.forEach((curve, i) => {
    const color = colorFor(curve.label, i);
    const points = curve.x
      .map((x, j) => `${px(x).toFixed(2)},${py(curve.y[j]).toFixed(2)}`)
      .join(" ");
    parts.push(
      `<polyline points="${points}" fill="none" stroke="${color}" stroke-width="1.8" data-scheme="${esc(curve.label)}"/>`,
    );
    if (curve.x.length === 1) {
      parts.push(
        `<circle cx="${px(curve.x[0]).toFixed(2)}" cy="${py(curve.y[0]).toFixed(2)}" r="3" fill="${color}"/>`,
      );
    }
    const lx = f.width - f.right - 130;
    const ly = f.top + 8 + i * 18;
    parts.push(
      `<line x1="${lx}" y1="${ly}" x2="${lx + 24}" y2="${ly}" stroke="${color}" stroke-width="2"/>`,
      `<text x="${lx + 30}" y="${ly + 4}">${esc(curve.label)}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("\n");
}

export interface Bar {
  label: string;
  mean: number;
  std: number;
}

export function renderBarChart(
  bars: Bar[],
  opts: { title: string; yLabel: string; annotation?: string },
): string {
  if (bars.length === 0) throw new Error("no bars to draw");
  const f = FRAME;
  const yHi = Math.max(...bars.map((b) => b.mean + b.std)) || 1;
  const py = (y: number) => f.height - f.bottom - (y / yHi) * (f.height - f.top - f.bottom);
  const band = (f.width - f.left - f.right) / bars.length;
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${f.width}" height="${f.height}" viewBox="0 0 ${f.width} ${f.height}" font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${f.width}" height="${f.height}" fill="white"/>`);
  parts.push(
    `<text x="${f.width / 2}" y="20" text-anchor="middle" font-size="15">${esc(opts.title)}</text>`,
  );
  for (const t of niceTicks(0, yHi)) {
    const y = py(t);
    parts.push(`<line x1="${f.left - 4}" y1="${y}" x2="${f.left}" y2="${y}" stroke="black"/>`);
    parts.push(`<line x1="${f.left}" y1="${y}" x2="${f.width - f.right}" y2="${y}" stroke="#e0e0e0"/>`);
    parts.push(`<text x="${f.left - 8}" y="${y + 4}" text-anchor="end">${fmt(t)}</text>`);
  }
  bars.forEach((bar, i) => {
    const color = colorFor(bar.label, i);
    const cx = f.left + band * (i + 0.5);
    const w = band * 0.55;
    const top = py(bar.mean);
    parts.push(
      `<rect x="${(cx - w / 2).toFixed(2)}" y="${top.toFixed(2)}" width="${w.toFixed(2)}" height="${(f.height - f.bottom - top).toFixed(2)}" fill="${color}" fill-opacity="0.85" data-scheme="${esc(bar.label)}"/>`,
    );
    if (bar.std > 0) {
      const yl = py(Math.max(bar.mean - bar.std, 0));
      const yh = py(bar.mean + bar.std);
      parts.push(
        `<line x1="${cx}" y1="${yl}" x2="${cx}" y2="${yh}" stroke="black"/>`,
        `<line x1="${cx - 6}" y1="${yh}" x2="${cx + 6}" y2="${yh}" stroke="black"/>`,
        `<line x1="${cx - 6}" y1="${yl}" x2="${cx + 6}" y2="${yl}" stroke="black"/>`,
      );
    }
    parts.push(
      `<text x="${cx}" y="${f.height - f.bottom + 17}" text-anchor="middle">${esc(bar.label)}</text>`,
      `<text x="${cx}" y="${top - 6}" text-anchor="middle">${fmt(bar.mean)}</text>`,
    );
  });
  parts.push(
    `<line x1="${f.left}" y1="${f.top}" x2="${f.left}" y2="${f.height - f.bottom}" stroke="black"/>`,
    `<line x1="${f.left}" y1="${f.height - f.bottom}" x2="${f.width - f.right}" y2="${f.height - f.bottom}" stroke="black"/>`,
    `<text x="18" y="${(f.top + f.height - f.bottom) / 2}" text-anchor="middle" transform="rotate(-90 18 ${(f.top + f.height - f.bottom) / 2})">${esc(opts.yLabel)}</text>`,
  );
  if (opts.annotation) {
    parts.push(
      `<text x="${f.width - f.right - 8}" y="${f.top + 10}" text-anchor="end" font-size="13" data-role="annotation">${esc(opts.annotation)}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}
