/** Draft portfolio editing: pure functions, no network calls. */

import type { ConstituentDoc, PortfolioDoc } from "./types.js";

/**
 * Technology swap: multiply a constituent's scopes by fixed factors,
 * modelling a production-process change at constant GVA.
 */
export interface TechnologySwap {
  label: string;
  scope1Factor: number;
  scope2Factor: number;
  scope3Factor: number;
}

/**
 * Green-steel preset: production emissions (scopes 1 and 2) drop from
 * 2.4 to 0.05 kg CO2e per kg of steel; value-chain scope 3 is untouched.
 */
export const GREEN_STEEL_SWAP: TechnologySwap = {
  label: "green steel",
  scope1Factor: 0.05 / 2.4,
  scope2Factor: 0.05 / 2.4,
  scope3Factor: 1.0,
};

export function clonePortfolio(p: PortfolioDoc): PortfolioDoc {
  return JSON.parse(JSON.stringify(p)) as PortfolioDoc;
}

export function addConstituent(p: PortfolioDoc, c: ConstituentDoc): PortfolioDoc {
  const next = clonePortfolio(p);
  next.constituents.push({ ...c });
  return next;
}

export function removeConstituent(p: PortfolioDoc, name: string): PortfolioDoc {
  const next = clonePortfolio(p);
  next.constituents = next.constituents.filter((c) => c.name !== name);
  return next;
}

export function updateField(
  p: PortfolioDoc,
  name: string,
  field: keyof ConstituentDoc,
  value: number | string,
): PortfolioDoc {
  const next = clonePortfolio(p);
  const target = next.constituents.find((c) => c.name === name);
  if (!target) throw new Error(`no constituent named ${name}`);
  (target as unknown as Record<string, unknown>)[field] = value;
  return next;
}

export function applyTechnologySwap(
  p: PortfolioDoc,
  name: string,
  swap: TechnologySwap,
): PortfolioDoc {
  const next = clonePortfolio(p);
  const target = next.constituents.find((c) => c.name === name);
  if (!target) throw new Error(`no constituent named ${name}`);
  target.scope1_kt *= swap.scope1Factor;
  target.scope2_kt *= swap.scope2Factor;
  target.scope3_kt *= swap.scope3Factor;
  return next;
}

export function totalEmissionsKt(p: PortfolioDoc): number {
  return p.constituents.reduce(
    (acc, c) => acc + c.scope1_kt + c.scope2_kt + c.scope3_kt,
    0,
  );
}

/** Draft summary line shown above the editor. */
export function draftSummary(p: PortfolioDoc): string {
  const total = totalEmissionsKt(p);
  return `${p.constituents.length} constituent(s), ` +
    `${Math.round(total).toLocaleString("en-US")} kt CO2e total, ` +
    `base year ${p.base_year}`;
}
