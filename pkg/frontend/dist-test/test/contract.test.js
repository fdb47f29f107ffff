"use strict";
/** Contract tests on recorded service payloads: every number surfaced by the
 * workbench is traceable to a payload field, never computed locally. */
var __importDefault = (this && this.__importDefault) || function (mod) {
    return (mod && mod.__esModule) ? mod : { "default": mod };
};
Object.defineProperty(exports, "__esModule", { value: true });
const strict_1 = __importDefault(require("node:assert/strict"));
const node_fs_1 = require("node:fs");
const node_path_1 = require("node:path");
const node_test_1 = require("node:test");
const charts_js_1 = require("../src/charts.js");
const state_js_1 = require("../src/state.js");
function fixture(name) {
    return JSON.parse((0, node_fs_1.readFileSync)((0, node_path_1.join)(__dirname, "..", "..", "test", "fixtures", `${name}.json`), "utf-8"));
}
const DRAFT = JSON.parse((0, node_fs_1.readFileSync)((0, node_path_1.join)(__dirname, "..", "..", "test", "fixtures", "ssab.json"), "utf-8"));
const REQUEST = {
    portfolio: DRAFT,
    scenario_ids: ["SSP2-RCP4.5"],
    mode: "mcmc",
};
function record(label, response) {
    return {
        label,
        request: REQUEST,
        response,
        startedAt: "2026-01-01T00:00:00Z",
        finishedAt: "2026-01-01T00:00:01Z",
    };
}
(0, node_test_1.test)("overlay chips match the recorded payload digits", () => {
    const current = fixture("align_ssab_current");
    const green = fixture("align_ssab_green");
    let state = (0, state_js_1.initialState)(DRAFT);
    state = (0, state_js_1.appendRun)(state, record("current", current));
    state = (0, state_js_1.appendRun)(state, record("green steel", green));
    const chips = (0, state_js_1.overlayRuns)(state).map((r) => (0, charts_js_1.summaryChip)(r.response.results["SSP2-RCP4.5"].summary));
    const currentMean = current.results["SSP2-RCP4.5"].summary.mean_end;
    const greenMean = green.results["SSP2-RCP4.5"].summary.mean_end;
    strict_1.default.equal(chips[0], `SSP2-RCP4.5: ${currentMean.toFixed(3)} °C (2100)`);
    strict_1.default.equal(chips[1], `SSP2-RCP4.5: ${greenMean.toFixed(3)} °C (2100)`);
    // the recorded engine run reproduces the published comparison:
    // green-steel alignment is cooler, both near the published 2.551/2.501
    strict_1.default.ok(greenMean < currentMean);
    strict_1.default.ok(Math.abs(currentMean - 2.551) < 0.15);
    strict_1.default.ok(Math.abs(greenMean - 2.501) < 0.15);
});
(0, node_test_1.test)("history is append-only and capped overlays keep the newest runs", () => {
    const current = fixture("align_ssab_current");
    let state = (0, state_js_1.initialState)(DRAFT);
    for (let i = 0; i < 5; i++) {
        state = (0, state_js_1.appendRun)(state, record(`run ${i + 1}`, current));
    }
    strict_1.default.equal(state.history.length, 5);
    strict_1.default.deepEqual((0, state_js_1.overlayRuns)(state).map((r) => r.label), ["run 3", "run 4", "run 5"]);
    strict_1.default.throws(() => {
        state.history.push("nope");
    });
});
(0, node_test_1.test)("identical provenance is surfaced as an equality indicator", () => {
    const current = fixture("align_ssab_current");
    const green = fixture("align_ssab_green");
    let state = (0, state_js_1.initialState)(DRAFT);
    state = (0, state_js_1.appendRun)(state, record("a", current));
    state = (0, state_js_1.appendRun)(state, record("b", current));
    state = (0, state_js_1.appendRun)(state, record("c", green));
    const [a, b, c] = (0, state_js_1.overlayRuns)(state);
    strict_1.default.ok((0, state_js_1.sameProvenance)(a, b), "identical payloads share provenance");
    strict_1.default.ok(!(0, state_js_1.sameProvenance)(a, c), "different portfolios differ in provenance");
});
(0, node_test_1.test)("payload provenance carries chain id, seed and config hash", () => {
    const doc = fixture("align_ssab_current");
    strict_1.default.equal(doc.provenance.chain_id, "default");
    strict_1.default.equal(typeof doc.provenance.seed, "number");
    strict_1.default.match(doc.provenance.config_hash, /^[0-9a-f]{16}$/);
    strict_1.default.ok(doc.provenance.adjustment_factor < 1.0);
});
