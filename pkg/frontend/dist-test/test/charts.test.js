"use strict";
var __importDefault = (this && this.__importDefault) || function (mod) {
    return (mod && mod.__esModule) ? mod : { "default": mod };
};
Object.defineProperty(exports, "__esModule", { value: true });
const strict_1 = __importDefault(require("node:assert/strict"));
const node_fs_1 = require("node:fs");
const node_path_1 = require("node:path");
const node_test_1 = require("node:test");
const charts_js_1 = require("../src/charts.js");
function loadFixture(name) {
    return JSON.parse((0, node_fs_1.readFileSync)((0, node_path_1.join)(__dirname, "..", "..", "test", "fixtures", `${name}.json`), "utf-8"));
}
(0, node_test_1.test)("fan chart geometry from a recorded payload", () => {
    const doc = loadFixture("align_ssab_current");
    const band = doc.results["SSP2-RCP4.5"].band;
    const geom = (0, charts_js_1.fanChartGeometry)(band, 720, 360, 2000);
    strict_1.default.ok(geom.medianPath.startsWith("M"));
    strict_1.default.equal(geom.bandPolygons.length, Object.keys(band.bands).length);
    strict_1.default.ok(geom.bandPolygons[0].path.endsWith("Z"));
    // annual series, decadal tick labels only
    for (const tick of geom.ticks) {
        strict_1.default.equal(Number(tick.label) % 10, 0);
    }
    strict_1.default.ok(geom.ticks.length >= 10);
});
(0, node_test_1.test)("quantile-ordering violations are refused at render time", () => {
    const doc = loadFixture("align_ssab_current");
    const band = structuredClone(doc.results["SSP2-RCP4.5"].band);
    const level = Object.keys(band.bands)[0];
    const i = band.years.indexOf(2050);
    band.bands[level].lower[i] = band.median[i] + 1.0;
    strict_1.default.throws(() => (0, charts_js_1.fanChartGeometry)(band, 720, 360, 2000), /ordering/);
});
(0, node_test_1.test)("tooltip shows the payload's exact quantiles", () => {
    const doc = loadFixture("align_ssab_current");
    const band = doc.results["SSP2-RCP4.5"].band;
    const text = (0, charts_js_1.tooltipAt)(band, 2050);
    const i = band.years.indexOf(2050);
    strict_1.default.match(text, new RegExp(band.median[i].toFixed(3)));
    const level = Object.keys(band.bands).sort()[0];
    strict_1.default.match(text, new RegExp(band.bands[level].lower[i].toFixed(3)));
});
(0, node_test_1.test)("summary chip renders the payload digits verbatim", () => {
    const doc = loadFixture("align_ssab_current");
    const summary = doc.results["SSP2-RCP4.5"].summary;
    const chip = (0, charts_js_1.summaryChip)(summary);
    strict_1.default.equal(chip, `SSP2-RCP4.5: ${summary.mean_end.toFixed(3)} °C (2100)`);
});
