/** The five figure kinds built from the simulation CSV schema. */

import { columnsBySuffix, parseCsv, requireColumn, Table } from "./csv.js";
import { colorFor, renderFigure, Series } from "./svg.js";

export const KINDS = ["hom", "distill", "onres_corr", "onres_bell", "coeffs"] as const;
export type Kind = (typeof KINDS)[number];

function suffixSeries(table: Table, t: number[], suffix: string): Series[] {
  const byDyn = columnsBySuffix(table, suffix);
  return [...byDyn.entries()].map(([dyn, y], i) => ({
    label: dyn,
    x: t,
    y,
    color: colorFor(i),
    dash: dyn === "phenomenological" ? "4 3" : dyn === "pseudomode" ? "7 3" : undefined,
  }));
}

/** Coincidence probability for every dynamics, with a zoomed inset
 * around the interference dip of the first curve. */
function homFigure(table: Table): string {
  const t = requireColumn(table, "t");
  const series = suffixSeries(table, t, "P11");
  const ref = series[0];
  let kMin = 0;
  ref.y.forEach((v, k) => {
    if (Number.isFinite(v) && v < ref.y[kMin]) {
      kMin = k;
    }
  });
  const half = 0.2 * (t[t.length - 1] - t[0]);
  const insetX: [number, number] = [
    Math.max(t[0], t[kMin] - half),
    Math.min(t[t.length - 1], t[kMin] + half),
  ];
  return renderFigure([
    {
      series,
      opts: {
        title: "Coincidence probability",
        xLabel: "Jt",
        yLabel: "P11",
        insetX,
      },
    },
  ]);
}

/** Post-selected concurrence plus the exported density-matrix
 * coherences that feed it. */
function distillFigure(table: Table): string {
  const t = requireColumn(table, "t");
  const panels = [
    {
      series: suffixSeries(table, t, "concurrence"),
      opts: { title: "Distilled concurrence", xLabel: "Jt", yLabel: "C" },
    },
  ];
  const cohNames = table.names.filter((n) => /\.coh_\d+_\d+_(re|im)$/.test(n));
  if (cohNames.length > 0) {
    const series = cohNames.map((name, i) => ({
      label: name,
      x: t,
      y: table.columns.get(name)!,
      color: colorFor(i),
      dash: name.endsWith("_im") ? "4 3" : undefined,
    }));
    panels.push({
      series,
      opts: { title: "Coherences", xLabel: "Jt", yLabel: "Re / Im" },
    });
  }
  return renderFigure(panels);
}

/** First-order coherence and mode negativity on the way to the steady state. */
function onresCorrFigure(table: Table): string {
  const t = requireColumn(table, "t");
  return renderFigure([
    {
      series: suffixSeries(table, t, "C1"),
      opts: { title: "First-order coherence", xLabel: "Jt", yLabel: "C1" },
    },
    {
      series: suffixSeries(table, t, "negativity"),
      opts: { title: "Mode negativity", xLabel: "Jt", yLabel: "N" },
    },
  ]);
}

/** Distilled concurrence plus fidelity with the symmetric Bell state. */
function onresBellFigure(table: Table): string {
  const t = requireColumn(table, "t");
  return renderFigure([
    {
      series: suffixSeries(table, t, "concurrence"),
      opts: { title: "Distilled concurrence", xLabel: "Jt", yLabel: "C" },
    },
    {
      series: suffixSeries(table, t, "fidelity_psi_plus"),
      opts: {
        title: "Fidelity with the symmetric Bell state",
        xLabel: "Jt",
        yLabel: "F",
      },
    },
  ]);
}

/** Three-panel bath-coefficient table: alpha, beta, kappa (Re and Im). */
function coeffsFigure(table: Table): string {
  const t = requireColumn(table, "t");
  const panels = ["alpha", "beta", "kappa"].map((name, i) => {
    const re = requireColumn(table, `${name}_re`);
    const im = requireColumn(table, `${name}_im`);
    return {
      series: [
        { label: `Re ${name}`, x: t, y: re, color: colorFor(i) },
        { label: `Im ${name}`, x: t, y: im, color: colorFor(i), dash: "4 3" },
      ],
      opts: {
        title: `Bath coefficient ${name}(t)`,
        xLabel: "t",
        yLabel: name,
        height: 260,
      },
    };
  });
  return renderFigure(panels);
}

const RENDERERS: Record<Kind, (table: Table) => string> = {
  hom: homFigure,
  distill: distillFigure,
  onres_corr: onresCorrFigure,
  onres_bell: onresBellFigure,
  coeffs: coeffsFigure,
};

export function render(kind: Kind, csvText: string): string {
  const renderer = RENDERERS[kind];
  if (renderer === undefined) {
    throw new Error(`unknown figure kind ${JSON.stringify(kind)}`);
  }
  return renderer(parseCsv(csvText));
}
