/** Local draft validation; submission is blocked while any error remains. */

import type { ConstituentDoc, PortfolioDoc } from "./types.js";

export interface FieldError {
  constituent: string;
  field: string;
  message: string;
}

export function validateConstituent(c: ConstituentDoc): FieldError[] {
  const errors: FieldError[] = [];
  const err = (field: string, message: string) =>
    errors.push({ constituent: c.name, field, message });
  if (!c.name.trim()) err("name", "name must not be empty");
  if (!c.sector.trim()) err("sector", "sector must not be empty");
  for (const field of ["scope1_kt", "scope2_kt", "scope3_kt"] as const) {
    const v = c[field];
    if (!Number.isFinite(v) || v < 0) err(field, "emissions must be >= 0");
  }
  if (!Number.isFinite(c.gva_musd) || c.gva_musd <= 0) {
    err("gva_musd", "GVA must be > 0");
  }
  return errors;
}

export function validateDraft(p: PortfolioDoc): FieldError[] {
  const errors: FieldError[] = [];
  if (!Number.isInteger(p.base_year) || p.base_year < 1900 || p.base_year > 2100) {
    errors.push({ constituent: "", field: "base_year", message: "base year out of range" });
  }
  if (p.constituents.length === 0) {
    errors.push({ constituent: "", field: "constituents", message: "portfolio is empty" });
  }
  for (const c of p.constituents) errors.push(...validateConstituent(c));
  return errors;
}

/** Run is enabled only for a non-empty, error-free draft. */
export function canRun(p: PortfolioDoc): boolean {
  return p.constituents.length > 0 && validateDraft(p).length === 0;
}
