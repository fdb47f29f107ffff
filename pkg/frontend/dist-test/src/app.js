"use strict";
/** DOM wiring for the workbench; all numbers on screen come from service
 * payloads or the local draft, never from client-side climate math. */
Object.defineProperty(exports, "__esModule", { value: true });
exports.boot = boot;
const api_js_1 = require("./api.js");
const charts_js_1 = require("./charts.js");
const portfolio_js_1 = require("./portfolio.js");
const state_js_1 = require("./state.js");
const validate_js_1 = require("./validate.js");
const SERVICE_URL = window.TEMPALIGN_SERVICE
    ?? "http://127.0.0.1:8000";
const BAND_COLORS = ["#2563eb", "#16a34a", "#dc2626"];
let state;
let panel;
function el(id) {
    const node = document.getElementById(id);
    if (!node)
        throw new Error(`missing element #${id}`);
    return node;
}
function renderDraft() {
    el("draft-summary").textContent = (0, portfolio_js_1.draftSummary)(state.draft);
    const errors = (0, validate_js_1.validateDraft)(state.draft);
    const list = el("validation-errors");
    list.innerHTML = "";
    for (const e of errors) {
        const item = document.createElement("li");
        item.textContent = `${e.constituent || "portfolio"}.${e.field}: ${e.message}`;
        list.appendChild(item);
    }
    el("run").disabled = !(0, validate_js_1.canRun)(state.draft);
    const tbody = el("constituents");
    tbody.innerHTML = "";
    for (const c of state.draft.constituents) {
        const row = document.createElement("tr");
        const cells = [
            c.name, c.sector, c.scope1_kt, c.scope2_kt, c.scope3_kt, c.gva_musd,
        ];
        for (const [i, value] of cells.entries()) {
            const cell = document.createElement("td");
            if (i < 2) {
                cell.textContent = String(value);
            }
            else {
                const input = document.createElement("input");
                input.type = "number";
                input.value = String(value);
                const field = ["scope1_kt", "scope2_kt", "scope3_kt", "gva_musd"][i - 2];
                input.addEventListener("change", () => {
                    state = { ...state, draft: (0, portfolio_js_1.updateField)(state.draft, c.name, field, Number(input.value)) };
                    renderDraft();
                });
                cell.appendChild(input);
            }
            row.appendChild(cell);
        }
        tbody.appendChild(row);
    }
}
function renderHistory() {
    const runs = (0, state_js_1.overlayRuns)(state, 3);
    const chips = el("summary-chips");
    chips.innerHTML = "";
    const svg = el("chart");
    svg.innerHTML = "";
    const width = 720;
    const height = 360;
    runs.forEach((record, runIdx) => {
        const color = BAND_COLORS[runIdx % BAND_COLORS.length];
        for (const sid of Object.keys(record.response.results)) {
            const { band, summary } = record.response.results[sid];
            const chip = document.createElement("span");
            chip.className = "chip";
            chip.style.borderColor = color;
            chip.textContent = `${record.label} ${(0, charts_js_1.summaryChip)(summary)}`;
            if (runIdx > 0 && (0, state_js_1.sameProvenance)(record, runs[0])) {
                chip.textContent += " [= run 1]";
            }
            chips.appendChild(chip);
            const geom = (0, charts_js_1.fanChartGeometry)(band, width, height, 2000);
            for (const poly of geom.bandPolygons) {
                const path = document.createElementNS("http://www.w3.org/2000/svg", "path");
                path.setAttribute("d", poly.path);
                path.setAttribute("fill", color);
                path.setAttribute("fill-opacity", "0.12");
                path.setAttribute("stroke", "none");
                svg.appendChild(path);
            }
            const median = document.createElementNS("http://www.w3.org/2000/svg", "path");
            median.setAttribute("d", geom.medianPath);
            median.setAttribute("fill", "none");
            median.setAttribute("stroke", color);
            median.setAttribute("stroke-width", "1.6");
            const title = document.createElementNS("http://www.w3.org/2000/svg", "title");
            title.textContent = (0, charts_js_1.tooltipAt)(band, 2050);
            median.appendChild(title);
            svg.appendChild(median);
            if (runIdx === 0) {
                for (const tick of geom.ticks) {
                    const label = document.createElementNS("http://www.w3.org/2000/svg", "text");
                    label.setAttribute("x", tick.x.toFixed(1));
                    label.setAttribute("y", String(height + 14));
                    label.setAttribute("font-size", "10");
                    label.textContent = tick.label;
                    svg.appendChild(label);
                }
            }
        }
    });
}
async function runAlignment() {
    const request = {
        portfolio: state.draft,
        scenario_ids: state.selectedScenarios,
        mode: state.mode,
        chain_id: state.mode === "mcmc" ? "default" : undefined,
        n: 1000,
        seed: 0,
        uncertainty: state.uncertainty,
    };
    const started = new Date().toISOString();
    const banner = el("error-banner");
    banner.hidden = true;
    try {
        const response = await panel.submit(request);
        if (response === null)
            return; // superseded by a newer run
        state = (0, state_js_1.appendRun)(state, {
            label: `run ${state.history.length + 1}`,
            request,
            response,
            startedAt: started,
            finishedAt: new Date().toISOString(),
        });
        renderHistory();
    }
    catch (err) {
        // non-destructive: history and draft stay untouched
        banner.hidden = false;
        banner.textContent = err instanceof api_js_1.ServiceError
            ? `service error ${err.status}: ${err.message}`
            : `service unreachable: ${String(err)}`;
    }
}
async function boot(initialDraft) {
    state = (0, state_js_1.initialState)(initialDraft);
    panel = new api_js_1.AlignPanel(SERVICE_URL, fetch.bind(window));
    const select = el("scenarios");
    for (const info of await (0, api_js_1.fetchScenarios)(SERVICE_URL, fetch.bind(window))) {
        const option = document.createElement("option");
        option.value = info.id;
        option.textContent = info.id;
        option.selected = state.selectedScenarios.includes(info.id);
        select.appendChild(option);
    }
    select.addEventListener("change", () => {
        state = {
            ...state,
            selectedScenarios: Array.from(select.selectedOptions, (o) => o.value),
        };
    });
    el("run").addEventListener("click", () => void runAlignment());
    el("green-steel").addEventListener("click", () => {
        const name = state.draft.constituents[0]?.name;
        if (!name)
            return;
        state = { ...state, draft: (0, portfolio_js_1.applyTechnologySwap)(state.draft, name, portfolio_js_1.GREEN_STEEL_SWAP) };
        renderDraft();
    });
    el("export").addEventListener("click", () => {
        const blob = new Blob([(0, state_js_1.exportSession)(state)], { type: "application/json" });
        const link = document.createElement("a");
        link.href = URL.createObjectURL(blob);
        link.download = "workbench-session.json";
        link.click();
    });
    el("mode").addEventListener("change", (event) => {
        const value = event.target.value;
        state = { ...state, mode: value === "emulator" ? "emulator" : "mcmc" };
    });
    renderDraft();
}
// The bundled SSAB portfolio is the default workbench draft.
fetch("./ssab.json")
    .then((r) => r.json())
    .then((doc) => boot(doc))
    .catch(() => {
    const fallback = { base_year: 2022, constituents: [] };
    void boot(fallback);
});
