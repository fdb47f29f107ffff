/** SVG fan-chart geometry: pure functions from band payloads to path data. */

import type { BandPayload, SummaryBlock } from "./types.js";

export interface FanChartGeometry {
  medianPath: string;
  bandPolygons: { level: string; path: string }[];
  ticks: { x: number; label: string }[];
  yTicks: { y: number; label: string }[];
  yMin: number;
  yMax: number;
}

function scale(v: number, lo: number, hi: number, out: number): number {
  return ((v - lo) / (hi - lo)) * out;
}

/**
 * Build the drawable geometry for one band. Quantile ordering
 * (lower <= median <= upper) is asserted for every drawn series; a payload
 * violating it is a client-side bug or a corrupted response.
 */
export function fanChartGeometry(
  band: BandPayload,
  width = 720,
  height = 360,
  firstYear?: number,
): FanChartGeometry {
  const start = firstYear ?? band.years[0];
  const idx0 = band.years.indexOf(start);
  if (idx0 < 0) throw new Error(`year ${start} not on the band axis`);
  const years = band.years.slice(idx0);
  const median = band.median.slice(idx0);

  const levels = Object.keys(band.bands).sort();
  for (const level of levels) {
    const { lower, upper } = band.bands[level];
    for (let i = idx0; i < band.years.length; i++) {
      if (lower[i] > band.median[i] + 1e-9 || upper[i] < band.median[i] - 1e-9) {
        throw new Error(
          `quantile ordering violated at year ${band.years[i]} (level ${level})`,
        );
      }
    }
  }

  let yMin = Math.min(...median);
  let yMax = Math.max(...median);
  for (const level of levels) {
    yMin = Math.min(yMin, ...band.bands[level].lower.slice(idx0));
    yMax = Math.max(yMax, ...band.bands[level].upper.slice(idx0));
  }
  const pad = 0.05 * (yMax - yMin || 1);
  yMin -= pad;
  yMax += pad;

  const x = (i: number) => scale(i, 0, years.length - 1, width);
  const y = (v: number) => height - scale(v, yMin, yMax, height);

  const medianPath = years
    .map((_, i) => `${i === 0 ? "M" : "L"}${x(i).toFixed(2)},${y(median[i]).toFixed(2)}`)
    .join(" ");

  const bandPolygons = levels.map((level) => {
    const lower = band.bands[level].lower.slice(idx0);
    const upper = band.bands[level].upper.slice(idx0);
    const forward = years.map(
      (_, i) => `${i === 0 ? "M" : "L"}${x(i).toFixed(2)},${y(upper[i]).toFixed(2)}`,
    );
    const back = [...years.keys()]
      .reverse()
      .map((i) => `L${x(i).toFixed(2)},${y(lower[i]).toFixed(2)}`);
    return { level, path: [...forward, ...back, "Z"].join(" ") };
  });

  // annual series, decadal tick labels
  const ticks = years
    .map((year, i) => ({ year, i }))
    .filter(({ year }) => year % 10 === 0)
    .map(({ year, i }) => ({ x: x(i), label: String(year) }));

  const yTicks: { y: number; label: string }[] = [];
  const step = niceStep(yMax - yMin);
  for (let v = Math.ceil(yMin / step) * step; v <= yMax; v += step) {
    yTicks.push({ y: y(v), label: v.toFixed(1) });
  }

  return { medianPath, bandPolygons, ticks, yTicks, yMin, yMax };
}

function niceStep(span: number): number {
  const raw = span / 6;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const m of [1, 2, 5, 10]) {
    if (raw <= m * mag) return m * mag;
  }
  return 10 * mag;
}

/** Summary chip text: the headline number is the Monte-Carlo mean at 2100. */
export function summaryChip(summary: SummaryBlock): string {
  return `${summary.scenario}: ${summary.mean_end.toFixed(3)} °C (${summary.end_year})`;
}

/** Tooltip content at one year: exact quantiles from the payload. */
export function tooltipAt(band: BandPayload, year: number): string {
  const i = band.years.indexOf(year);
  if (i < 0) throw new Error(`year ${year} not on the band axis`);
  const lines = [`${year}: median ${band.median[i].toFixed(3)} °C`];
  for (const level of Object.keys(band.bands).sort()) {
    const { lower, upper } = band.bands[level];
    const pct = (parseFloat(level) * 100).toFixed(0);
    lines.push(`${pct}%: ${lower[i].toFixed(3)} .. ${upper[i].toFixed(3)}`);
  }
  return lines.join("\n");
}
