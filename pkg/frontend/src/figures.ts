/**
 * Figure assembly from solver CSVs.
 *
 * - value_sweep / effort_sweep / rent_sweep: one curve per input file,
 *   restricted to the union of the continuation regions.
 * - rent_vs_effort: scatter of (effort, rent) pairs over the continuation
 *   rows of a single file.
 * - full_value: the value function over the whole domain of a single file,
 *   including the -x branch on the stopping region.
 */

import { writeFileSync } from "node:fs";
import { continuationEnd, readSolution, SolutionTable } from "./csv.js";
import { renderChart, Series } from "./svg.js";

export const KINDS = [
    "value_sweep", "effort_sweep", "rent_sweep", "rent_vs_effort", "full_value",
] as const;

export type FigureKind = (typeof KINDS)[number];

export interface FigureSpec {
    inputs: string[];
    output: string;
    kind: FigureKind;
    xLabel?: string;
    yLabel?: string;
}

function sweepSeries(tables: SolutionTable[], column: "value" | "effort" | "rent"): Series[] {
    const end = Math.max(...tables.map(continuationEnd));
    return tables.map((t) => {
        const xs: number[] = [];
        const ys: number[] = [];
        for (let i = 0; i < t.x.length; i++) {
            if (t.stopping[i] === 0 && t.x[i] <= end) {
                xs.push(t.x[i]);
                ys.push(t[column][i]);
            }
        }
        return { label: `sigma = ${t.label}`, xs, ys, kind: "line" as const };
    });
}

export function buildFigure(spec: FigureSpec): string {
    if (spec.inputs.length === 0) {
        throw new Error("at least one input CSV is required");
    }
    if (!KINDS.includes(spec.kind)) {
        throw new Error(`unknown figure kind '${spec.kind}'`);
    }
    const single: FigureKind[] = ["rent_vs_effort", "full_value"];
    if (single.includes(spec.kind) && spec.inputs.length !== 1) {
        throw new Error(`${spec.kind} takes exactly one input CSV`);
    }
    const tables = spec.inputs.map(readSolution);

    switch (spec.kind) {
        case "value_sweep":
            return renderChart(sweepSeries(tables, "value"), {
                title: "Value function on the continuation region",
                xLabel: spec.xLabel ?? "promised value x",
                yLabel: spec.yLabel ?? "value v(x)",
            });
        case "effort_sweep":
            return renderChart(sweepSeries(tables, "effort"), {
                title: "Recommended effort on the continuation region",
                xLabel: spec.xLabel ?? "promised value x",
                yLabel: spec.yLabel ?? "effort a(x)",
            });
        case "rent_sweep":
            return renderChart(sweepSeries(tables, "rent"), {
                title: "Rent on the continuation region",
                xLabel: spec.xLabel ?? "promised value x",
                yLabel: spec.yLabel ?? "rent r(x)",
            });
        case "rent_vs_effort": {
            const t = tables[0];
            const xs: number[] = [];
            const ys: number[] = [];
            for (let i = 0; i < t.x.length; i++) {
                if (t.stopping[i] === 0) {
                    xs.push(t.effort[i]);
                    ys.push(t.rent[i]);
                }
            }
            return renderChart(
                [{ label: `sigma = ${t.label}`, xs, ys, kind: "scatter" }],
                {
                    title: "Rent against recommended effort",
                    xLabel: spec.xLabel ?? "effort a",
                    yLabel: spec.yLabel ?? "rent r",
                });
        }
        case "full_value": {
            const t = tables[0];
            return renderChart(
                [{ label: `sigma = ${t.label}`, xs: t.x, ys: t.value, kind: "line" }],
                {
                    title: "Value function on the whole domain",
                    xLabel: spec.xLabel ?? "promised value x",
                    yLabel: spec.yLabel ?? "value v(x)",
                });
        }
    }
}

export function render(spec: FigureSpec): void {
    writeFileSync(spec.output, buildFigure(spec));
}
