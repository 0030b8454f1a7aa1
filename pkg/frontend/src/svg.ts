/** Deterministic SVG line-chart primitives: no timestamps, no random
 * ids, fixed float formatting, so re-rendering gives identical bytes. */

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color: string;
  dash?: string;
}

export interface PanelOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  width?: number;
  height?: number;
  /** Optional zoomed inset: x-range to magnify, drawn top-right. */
  insetX?: [number, number];
}

const PALETTE = ["#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#ff7f0e", "#8c564b"];

export function colorFor(index: number): string {
  return PALETTE[index % PALETTE.length];
}

function fmt(v: number): string {
  if (!Number.isFinite(v)) {
    throw new Error(`non-finite coordinate ${v}`);
  }
  return v.toFixed(2);
}

function ticks(lo: number, hi: number, n = 5): number[] {
  if (hi <= lo) {
    return [lo];
  }
  const rawStep = (hi - lo) / n;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => (hi - lo) / s <= n)!;
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

function tickLabel(v: number): string {
  const a = Math.abs(v);
  if (a !== 0 && (a < 1e-3 || a >= 1e4)) {
    return v.toExponential(1);
  }
  return String(Number(v.toPrecision(4)));
}

interface Extent {
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

function extent(series: Series[], xRange?: [number, number]): Extent {
  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const s of series) {
    for (let i = 0; i < s.x.length; i++) {
      const x = s.x[i];
      const y = s.y[i];
      if (!Number.isFinite(y)) {
        continue; // gaps (e.g. failed post-selection) are skipped
      }
      if (xRange && (x < xRange[0] || x > xRange[1])) {
        continue;
      }
      xMin = Math.min(xMin, x);
      xMax = Math.max(xMax, x);
      yMin = Math.min(yMin, y);
      yMax = Math.max(yMax, y);
    }
  }
  if (!Number.isFinite(xMin) || !Number.isFinite(yMin)) {
    throw new Error("no finite data points to plot");
  }
  if (yMax === yMin) {
    yMax = yMin + 1;
  }
  const pad = 0.05 * (yMax - yMin);
  return { xMin, xMax, yMin: yMin - pad, yMax: yMax + pad };
}

function polyline(
  s: Series,
  e: Extent,
  box: { x0: number; y0: number; w: number; h: number },
  xRange?: [number, number],
): string {
  const sx = (x: number) => box.x0 + ((x - e.xMin) / (e.xMax - e.xMin)) * box.w;
  const sy = (y: number) => box.y0 + box.h - ((y - e.yMin) / (e.yMax - e.yMin)) * box.h;
  const segments: string[] = [];
  let current: string[] = [];
  for (let i = 0; i < s.x.length; i++) {
    const x = s.x[i];
    const y = s.y[i];
    const inside =
      Number.isFinite(y) && (!xRange || (x >= xRange[0] && x <= xRange[1]));
    if (inside) {
      current.push(`${fmt(sx(x))},${fmt(sy(y))}`);
    } else if (current.length > 0) {
      segments.push(current.join(" "));
      current = [];
    }
  }
  if (current.length > 0) {
    segments.push(current.join(" "));
  }
  const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
  return segments
    .map(
      (pts) =>
        `<polyline fill="none" stroke="${s.color}" stroke-width="1.5"${dash} points="${pts}"/>`,
    )
    .join("\n");
}

/** One titled panel with axes, ticks, legend and optional inset. */
export function renderPanel(series: Series[], opts: PanelOptions): string {
  const width = opts.width ?? 560;
  const height = opts.height ?? 360;
  const box = { x0: 60, y0: 40, w: width - 80, h: height - 90 };
  const e = extent(series);
  const parts: string[] = [];

  parts.push(
    `<rect x="${box.x0}" y="${box.y0}" width="${box.w}" height="${box.h}" fill="white" stroke="#333"/>`,
  );
  parts.push(
    `<text x="${width / 2}" y="22" text-anchor="middle" font-size="14" font-weight="bold">${opts.title}</text>`,
  );

  for (const tx of ticks(e.xMin, e.xMax)) {
    const px = box.x0 + ((tx - e.xMin) / (e.xMax - e.xMin)) * box.w;
    parts.push(
      `<line x1="${fmt(px)}" y1="${box.y0 + box.h}" x2="${fmt(px)}" y2="${box.y0 + box.h + 4}" stroke="#333"/>`,
      `<text x="${fmt(px)}" y="${box.y0 + box.h + 17}" text-anchor="middle" font-size="10">${tickLabel(tx)}</text>`,
    );
  }
  for (const ty of ticks(e.yMin, e.yMax)) {
    const py = box.y0 + box.h - ((ty - e.yMin) / (e.yMax - e.yMin)) * box.h;
    parts.push(
      `<line x1="${box.x0 - 4}" y1="${fmt(py)}" x2="${box.x0}" y2="${fmt(py)}" stroke="#333"/>`,
      `<text x="${box.x0 - 7}" y="${fmt(py)}" text-anchor="end" dominant-baseline="middle" font-size="10">${tickLabel(ty)}</text>`,
    );
  }
  parts.push(
    `<text x="${width / 2}" y="${height - 28}" text-anchor="middle" font-size="12">${opts.xLabel}</text>`,
    `<text x="16" y="${box.y0 + box.h / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 16 ${box.y0 + box.h / 2})">${opts.yLabel}</text>`,
  );

  for (const s of series) {
    parts.push(polyline(s, e, box));
  }

  // legend
  series.forEach((s, i) => {
    const ly = box.y0 + 14 + 16 * i;
    const lx = box.x0 + box.w - 150;
    parts.push(
      `<line x1="${lx}" y1="${ly}" x2="${lx + 24}" y2="${ly}" stroke="${s.color}" stroke-width="1.5"${s.dash ? ` stroke-dasharray="${s.dash}"` : ""}/>`,
      `<text x="${lx + 30}" y="${ly + 4}" font-size="11">${s.label}</text>`,
    );
  });

  if (opts.insetX) {
    const inset = {
      x0: box.x0 + box.w * 0.56,
      y0: box.y0 + box.h * 0.08,
      w: box.w * 0.38,
      h: box.h * 0.34,
    };
    const ei = extent(series, opts.insetX);
    parts.push(
      `<rect x="${fmt(inset.x0)}" y="${fmt(inset.y0)}" width="${fmt(inset.w)}" height="${fmt(inset.h)}" fill="white" stroke="#777"/>`,
    );
    for (const s of series) {
      parts.push(polyline(s, ei, inset, opts.insetX));
    }
  }

  return parts.join("\n");
}

/** Stack panels vertically into one standalone SVG document. */
export function renderFigure(
  panels: { series: Series[]; opts: PanelOptions }[],
): string {
  const width = Math.max(...panels.map((p) => p.opts.width ?? 560));
  let y = 0;
  const groups: string[] = [];
  for (const p of panels) {
    const h = p.opts.height ?? 360;
    groups.push(
      `<g transform="translate(0 ${y})">\n${renderPanel(p.series, p.opts)}\n</g>`,
    );
    y += h;
  }
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${y}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${width}" height="${y}" fill="white"/>`,
    ...groups,
    "</svg>",
    "",
  ].join("\n");
}
