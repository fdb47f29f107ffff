"use strict";
/** Draft portfolio editing: pure functions, no network calls. */
Object.defineProperty(exports, "__esModule", { value: true });
exports.GREEN_STEEL_SWAP = void 0;
exports.clonePortfolio = clonePortfolio;
exports.addConstituent = addConstituent;
exports.removeConstituent = removeConstituent;
exports.updateField = updateField;
exports.applyTechnologySwap = applyTechnologySwap;
exports.totalEmissionsKt = totalEmissionsKt;
exports.draftSummary = draftSummary;
/**
 * Green-steel preset: production emissions (scopes 1 and 2) drop from
 * 2.4 to 0.05 kg CO2e per kg of steel; value-chain scope 3 is untouched.
 */
exports.GREEN_STEEL_SWAP = {
    label: "green steel",
    scope1Factor: 0.05 / 2.4,
    scope2Factor: 0.05 / 2.4,
    scope3Factor: 1.0,
};
function clonePortfolio(p) {
    return JSON.parse(JSON.stringify(p));
}
function addConstituent(p, c) {
    const next = clonePortfolio(p);
    next.constituents.push({ ...c });
    return next;
}
function removeConstituent(p, name) {
    const next = clonePortfolio(p);
    next.constituents = next.constituents.filter((c) => c.name !== name);
    return next;
}
function updateField(p, name, field, value) {
    const next = clonePortfolio(p);
    const target = next.constituents.find((c) => c.name === name);
    if (!target)
        throw new Error(`no constituent named ${name}`);
    target[field] = value;
    return next;
}
function applyTechnologySwap(p, name, swap) {
    const next = clonePortfolio(p);
    const target = next.constituents.find((c) => c.name === name);
    if (!target)
        throw new Error(`no constituent named ${name}`);
    target.scope1_kt *= swap.scope1Factor;
    target.scope2_kt *= swap.scope2Factor;
    target.scope3_kt *= swap.scope3Factor;
    return next;
}
function totalEmissionsKt(p) {
    return p.constituents.reduce((acc, c) => acc + c.scope1_kt + c.scope2_kt + c.scope3_kt, 0);
}
/** Draft summary line shown above the editor. */
function draftSummary(p) {
    const total = totalEmissionsKt(p);
    return `${p.constituents.length} constituent(s), ` +
        `${Math.round(total).toLocaleString("en-US")} kt CO2e total, ` +
        `base year ${p.base_year}`;
}
