/**
 * Minimal deterministic SVG chart builder: polylines and scatters on a
 * linear-linear frame with tick marks and a legend. No timestamps, no
 * randomness — re-rendering the same data yields identical bytes.
 */

export interface Series {
    label: string;
    xs: number[];
    ys: number[];
    kind: "line" | "scatter";
}

export interface ChartOptions {
    title: string;
    xLabel: string;
    yLabel: string;
    width?: number;
    height?: number;
}

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const MARGIN = { left: 64, right: 24, top: 36, bottom: 48 };

function niceTicks(lo: number, hi: number, count = 6): number[] {
    if (!(hi > lo)) {
        hi = lo + 1;
    }
    const span = hi - lo;
    const step0 = span / Math.max(count - 1, 1);
    const mag = Math.pow(10, Math.floor(Math.log10(step0)));
    const candidates = [1, 2, 2.5, 5, 10].map((m) => m * mag);
    const step = candidates.find((s) => span / s <= count) ?? candidates[candidates.length - 1];
    const start = Math.ceil(lo / step) * step;
    const ticks: number[] = [];
    for (let t = start; t <= hi + 1e-12 * span; t += step) {
        ticks.push(Math.abs(t) < 1e-12 * span ? 0 : t);
    }
    return ticks;
}

function fmt(v: number): string {
    return Number(v.toPrecision(6)).toString();
}

export function renderChart(series: Series[], opts: ChartOptions): string {
    const width = opts.width ?? 800;
    const height = opts.height ?? 520;
    const plotW = width - MARGIN.left - MARGIN.right;
    const plotH = height - MARGIN.top - MARGIN.bottom;

    let xLo = Infinity, xHi = -Infinity, yLo = Infinity, yHi = -Infinity;
    for (const s of series) {
        for (const v of s.xs) { xLo = Math.min(xLo, v); xHi = Math.max(xHi, v); }
        for (const v of s.ys) { yLo = Math.min(yLo, v); yHi = Math.max(yHi, v); }
    }
    if (!Number.isFinite(xLo)) { xLo = 0; xHi = 1; }
    if (!Number.isFinite(yLo)) { yLo = 0; yHi = 1; }
    if (xHi === xLo) { xHi = xLo + 1; }
    if (yHi === yLo) { yHi = yLo + 1; }
    const padY = 0.04 * (yHi - yLo);
    yLo -= padY; yHi += padY;

    const px = (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * plotW;
    const py = (y: number) => MARGIN.top + (1 - (y - yLo) / (yHi - yLo)) * plotH;

    const parts: string[] = [];
    parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`);
    parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
    parts.push(`<text x="${width / 2}" y="20" text-anchor="middle" font-family="sans-serif" font-size="15">${opts.title}</text>`);

    // frame and ticks
    parts.push(`<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333" stroke-width="1"/>`);
    for (const t of niceTicks(xLo, xHi)) {
        const X = px(t).toFixed(2);
        parts.push(`<line x1="${X}" y1="${MARGIN.top + plotH}" x2="${X}" y2="${MARGIN.top + plotH + 5}" stroke="#333"/>`);
        parts.push(`<text x="${X}" y="${MARGIN.top + plotH + 18}" text-anchor="middle" font-family="sans-serif" font-size="11">${fmt(t)}</text>`);
    }
    for (const t of niceTicks(yLo, yHi)) {
        const Y = py(t).toFixed(2);
        parts.push(`<line x1="${MARGIN.left - 5}" y1="${Y}" x2="${MARGIN.left}" y2="${Y}" stroke="#333"/>`);
        parts.push(`<text x="${MARGIN.left - 8}" y="${Y}" text-anchor="end" dominant-baseline="middle" font-family="sans-serif" font-size="11">${fmt(t)}</text>`);
    }
    parts.push(`<text x="${MARGIN.left + plotW / 2}" y="${height - 10}" text-anchor="middle" font-family="sans-serif" font-size="13">${opts.xLabel}</text>`);
    parts.push(`<text x="16" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 16 ${MARGIN.top + plotH / 2})">${opts.yLabel}</text>`);

    series.forEach((s, i) => {
        const color = COLORS[i % COLORS.length];
        if (s.kind === "line") {
            const pts = s.xs.map((x, j) => `${px(x).toFixed(2)},${py(s.ys[j]).toFixed(2)}`).join(" ");
            parts.push(`<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="1.6"/>`);
        } else {
            for (let j = 0; j < s.xs.length; j++) {
                parts.push(`<circle cx="${px(s.xs[j]).toFixed(2)}" cy="${py(s.ys[j]).toFixed(2)}" r="2.2" fill="${color}"/>`);
            }
        }
        const ly = MARGIN.top + 16 + 16 * i;
        parts.push(`<line x1="${width - 150}" y1="${ly - 4}" x2="${width - 126}" y2="${ly - 4}" stroke="${color}" stroke-width="2"/>`);
        parts.push(`<text x="${width - 120}" y="${ly}" font-family="sans-serif" font-size="12">${s.label}</text>`);
    });

    parts.push("</svg>");
    return parts.join("\n") + "\n";
}
