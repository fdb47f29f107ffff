import assert from "node:assert/strict";
import { readFileSync } from "node:fs";
import { join } from "node:path";
import { test } from "node:test";

import { removeConstituent, updateField } from "../src/portfolio.js";
import type { PortfolioDoc } from "../src/types.js";
import { canRun, validateDraft } from "../src/validate.js";

function loadSsab(): PortfolioDoc {
  return JSON.parse(
    readFileSync(join(__dirname, "..", "..", "test", "fixtures", "ssab.json"), "utf-8"),
  ) as PortfolioDoc;
}

test("bundled portfolio validates and can run", () => {
  const draft = loadSsab();
  assert.deepEqual(validateDraft(draft), []);
  assert.ok(canRun(draft));
});

test("zero GVA produces an inline field error and blocks submission", () => {
  const draft = loadSsab();
  const broken = updateField(draft, draft.constituents[0].name, "gva_musd", 0);
  const errors = validateDraft(broken);
  assert.equal(errors.length, 1);
  assert.equal(errors[0].field, "gva_musd");
  assert.ok(!canRun(broken));
});

test("negative emissions are rejected per field", () => {
  const draft = loadSsab();
  const broken = updateField(draft, draft.constituents[0].name, "scope2_kt", -5);
  assert.ok(validateDraft(broken).some((e) => e.field === "scope2_kt"));
});

test("removing the only constituent disables Run", () => {
  const draft = loadSsab();
  const empty = removeConstituent(draft, draft.constituents[0].name);
  assert.ok(!canRun(empty));
  assert.ok(validateDraft(empty).some((e) => e.field === "constituents"));
});
