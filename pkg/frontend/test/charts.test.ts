import assert from "node:assert/strict";
import { readFileSync } from "node:fs";
import { join } from "node:path";
import { test } from "node:test";

import { fanChartGeometry, summaryChip, tooltipAt } from "../src/charts.js";
import type { AlignResponse } from "../src/types.js";

function loadFixture(name: string): AlignResponse {
  return JSON.parse(
    readFileSync(join(__dirname, "..", "..", "test", "fixtures", `${name}.json`), "utf-8"),
  ) as AlignResponse;
}

test("fan chart geometry from a recorded payload", () => {
  const doc = loadFixture("align_ssab_current");
  const band = doc.results["SSP2-RCP4.5"].band;
  const geom = fanChartGeometry(band, 720, 360, 2000);
  assert.ok(geom.medianPath.startsWith("M"));
  assert.equal(geom.bandPolygons.length, Object.keys(band.bands).length);
  assert.ok(geom.bandPolygons[0].path.endsWith("Z"));
  // annual series, decadal tick labels only
  for (const tick of geom.ticks) {
    assert.equal(Number(tick.label) % 10, 0);
  }
  assert.ok(geom.ticks.length >= 10);
});

test("quantile-ordering violations are refused at render time", () => {
  const doc = loadFixture("align_ssab_current");
  const band = structuredClone(doc.results["SSP2-RCP4.5"].band);
  const level = Object.keys(band.bands)[0];
  const i = band.years.indexOf(2050);
  band.bands[level].lower[i] = band.median[i] + 1.0;
  assert.throws(() => fanChartGeometry(band, 720, 360, 2000), /ordering/);
});

test("tooltip shows the payload's exact quantiles", () => {
  const doc = loadFixture("align_ssab_current");
  const band = doc.results["SSP2-RCP4.5"].band;
  const text = tooltipAt(band, 2050);
  const i = band.years.indexOf(2050);
  assert.match(text, new RegExp(band.median[i].toFixed(3)));
  const level = Object.keys(band.bands).sort()[0];
  assert.match(text, new RegExp(band.bands[level].lower[i].toFixed(3)));
});

test("summary chip renders the payload digits verbatim", () => {
  const doc = loadFixture("align_ssab_current");
  const summary = doc.results["SSP2-RCP4.5"].summary;
  const chip = summaryChip(summary);
  assert.equal(chip, `SSP2-RCP4.5: ${summary.mean_end.toFixed(3)} °C (2100)`);
});
