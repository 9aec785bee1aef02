#!/usr/bin/env node
/**
 * pppcontract-figures render --kind K --in CSV[,CSV...] --out IMG
 *
 * Exit codes: 0 success, 1 data/schema error (the message names the missing
 * column), 2 usage error.
 */

import { FigureKind, KINDS, render } from "./figures.js";

function usage(): string {
    return `usage: pppcontract-figures render --kind <${KINDS.join("|")}> ` +
        "--in CSV[,CSV...] --out IMG";
}

export function main(argv: string[]): number {
    if (argv[0] !== "render") {
        console.error(usage());
        return 2;
    }
    let kind: string | undefined;
    let inputs: string[] = [];
    let output: string | undefined;
    for (let i = 1; i < argv.length; i += 2) {
        const flag = argv[i];
        const value = argv[i + 1];
        if (value === undefined) {
            console.error(`missing value for ${flag}\n${usage()}`);
            return 2;
        }
        if (flag === "--kind") kind = value;
        else if (flag === "--in") inputs = value.split(",").filter((s) => s.length > 0);
        else if (flag === "--out") output = value;
        else {
            console.error(`unknown flag ${flag}\n${usage()}`);
            return 2;
        }
    }
    if (!kind || !output || inputs.length === 0) {
        console.error(usage());
        return 2;
    }
    if (!(KINDS as readonly string[]).includes(kind)) {
        console.error(`unknown figure kind '${kind}'\n${usage()}`);
        return 2;
    }
    try {
        render({ kind: kind as FigureKind, inputs, output });
    } catch (err) {
        console.error(err instanceof Error ? err.message : String(err));
        return 1;
    }
    return 0;
}

const invokedDirectly = process.argv[1] !== undefined
    && import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
    process.exit(main(process.argv.slice(2)));
}
