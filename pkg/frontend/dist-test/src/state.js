"use strict";
/** Workbench state: current draft, settings and an append-only run history. */
Object.defineProperty(exports, "__esModule", { value: true });
exports.initialState = initialState;
exports.appendRun = appendRun;
exports.overlayRuns = overlayRuns;
exports.sameProvenance = sameProvenance;
exports.exportSession = exportSession;
exports.importSession = importSession;
function initialState(draft) {
    return {
        draft,
        selectedScenarios: ["SSP2-RCP4.5"],
        uncertainty: null,
        mode: "mcmc",
        history: [],
    };
}
/** History is append-only: every update returns a longer frozen list. */
function appendRun(state, record) {
    const id = state.history.length === 0
        ? 1
        : state.history[state.history.length - 1].id + 1;
    return {
        ...state,
        history: Object.freeze([...state.history, { ...record, id }]),
    };
}
/** Up to the three most recent runs are overlaid in the compare view. */
function overlayRuns(state, limit = 3) {
    return state.history.slice(-limit);
}
/**
 * Two runs with equal provenance are guaranteed byte-identical by the
 * engine; the compare view surfaces that as an equality indicator.
 */
function sameProvenance(a, b) {
    return a.response.provenance.config_hash === b.response.provenance.config_hash
        && a.response.provenance.seed === b.response.provenance.seed;
}
function exportSession(state) {
    return JSON.stringify({
        draft: state.draft,
        selectedScenarios: state.selectedScenarios,
        uncertainty: state.uncertainty,
        mode: state.mode,
        history: state.history,
    }, null, 2);
}
function importSession(text) {
    const doc = JSON.parse(text);
    if (!doc.draft || !Array.isArray(doc.history)) {
        throw new Error("not a workbench session document");
    }
    return {
        draft: doc.draft,
        selectedScenarios: doc.selectedScenarios ?? [],
        uncertainty: doc.uncertainty ?? null,
        mode: doc.mode === "emulator" ? "emulator" : "mcmc",
        history: Object.freeze([...doc.history]),
    };
}
