/** Workbench state: current draft, settings and an append-only run history. */

import type { AlignRequest, AlignResponse, PortfolioDoc, UncertaintyDoc } from "./types.js";

export interface RunRecord {
  id: number;
  label: string;
  request: AlignRequest;
  response: AlignResponse;
  startedAt: string;
  finishedAt: string;
}

export interface WorkbenchState {
  draft: PortfolioDoc;
  selectedScenarios: string[];
  uncertainty: UncertaintyDoc | null;
  mode: "mcmc" | "emulator";
  history: ReadonlyArray<RunRecord>;
}

export function initialState(draft: PortfolioDoc): WorkbenchState {
  return {
    draft,
    selectedScenarios: ["SSP2-RCP4.5"],
    uncertainty: null,
    mode: "mcmc",
    history: [],
  };
}

/** History is append-only: every update returns a longer frozen list. */
export function appendRun(
  state: WorkbenchState,
  record: Omit<RunRecord, "id">,
): WorkbenchState {
  const id = state.history.length === 0
    ? 1
    : state.history[state.history.length - 1].id + 1;
  return {
    ...state,
    history: Object.freeze([...state.history, { ...record, id }]),
  };
}

/** Up to the three most recent runs are overlaid in the compare view. */
export function overlayRuns(state: WorkbenchState, limit = 3): RunRecord[] {
  return state.history.slice(-limit);
}

/**
 * Two runs with equal provenance are guaranteed byte-identical by the
 * engine; the compare view surfaces that as an equality indicator.
 */
export function sameProvenance(a: RunRecord, b: RunRecord): boolean {
  return a.response.provenance.config_hash === b.response.provenance.config_hash
    && a.response.provenance.seed === b.response.provenance.seed;
}

export function exportSession(state: WorkbenchState): string {
  return JSON.stringify(
    {
      draft: state.draft,
      selectedScenarios: state.selectedScenarios,
      uncertainty: state.uncertainty,
      mode: state.mode,
      history: state.history,
    },
    null,
    2,
  );
}

export function importSession(text: string): WorkbenchState {
  const doc = JSON.parse(text) as WorkbenchState;
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
