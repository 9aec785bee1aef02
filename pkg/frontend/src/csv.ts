/**
 * Reading of the solver's solution CSVs.
 *
 * Expected schema: header `x,value,effort,rent,stopping` followed by one row
 * per grid node (boundaries included). A missing column is a hard error that
 * names the column, so a mismatched file fails loudly rather than plotting
 * garbage.
 */

import { readFileSync } from "node:fs";
import { basename } from "node:path";

export interface SolutionTable {
    /** label derived from the file name, e.g. "1.2" for solution_1.2.csv */
    label: string;
    x: number[];
    value: number[];
    effort: number[];
    rent: number[];
    stopping: number[];
}

export class SchemaError extends Error {
    constructor(public column: string, file: string) {
        super(`${file}: missing required column '${column}'`);
    }
}

const REQUIRED = ["x", "value", "effort", "rent", "stopping"] as const;

export function labelFromPath(path: string): string {
    const stem = basename(path).replace(/\.[^.]*$/, "");
    const m = stem.match(/^solution_(.+)$/);
    return m ? m[1] : stem;
}

export function readSolution(path: string): SolutionTable {
    const text = readFileSync(path, "utf8");
    const lines = text.split(/\r?\n/).filter((l) => l.trim().length > 0);
    if (lines.length === 0) {
        throw new Error(`${path}: empty file`);
    }
    const header = lines[0].split(",").map((h) => h.trim());
    const index = new Map(header.map((name, i) => [name, i]));
    for (const col of REQUIRED) {
        if (!index.has(col)) {
            throw new SchemaError(col, path);
        }
    }
    const table: SolutionTable = {
        label: labelFromPath(path),
        x: [], value: [], effort: [], rent: [], stopping: [],
    };
    for (let i = 1; i < lines.length; i++) {
        const cells = lines[i].split(",");
        const get = (col: string) => {
            const v = Number(cells[index.get(col)!]);
            if (!Number.isFinite(v)) {
                throw new Error(`${path}: line ${i + 1}: non-numeric '${col}'`);
            }
            return v;
        };
        table.x.push(get("x"));
        table.value.push(get("value"));
        table.effort.push(get("effort"));
        table.rent.push(get("rent"));
        table.stopping.push(get("stopping"));
    }
    return table;
}

/** Largest x with stopping = 0; -Infinity when every row stops. */
export function continuationEnd(table: SolutionTable): number {
    let end = -Infinity;
    for (let i = 0; i < table.x.length; i++) {
        if (table.stopping[i] === 0 && table.x[i] > end) {
            end = table.x[i];
        }
    }
    return end;
}
