/** Payload types mirroring the engine's HTTP JSON API. */

export interface ConstituentDoc {
  name: string;
  sector: string;
  scope1_kt: number;
  scope2_kt: number;
  scope3_kt: number;
  gva_musd: number;
  reporting_year?: number;
}

export interface PortfolioDoc {
  base_year: number;
  constituents: ConstituentDoc[];
}

export interface UncertaintyDoc {
  family: "normal" | "lognormal";
  mu: number;
  sigma: number;
  mode: "co2" | "proportional";
}

export interface AlignRequest {
  portfolio: PortfolioDoc;
  scenario_ids: string[];
  mode: "mcmc" | "emulator";
  chain_id?: string;
  model_id?: string;
  n?: number;
  seed?: number;
  levels?: number[];
  uncertainty?: UncertaintyDoc | null;
}

export interface BandPayload {
  years: number[];
  median: number[];
  mean: number[];
  bands: Record<string, { lower: number[]; upper: number[] }>;
  n_samples: number | null;
  provenance: string;
  seed: number | null;
}

export interface SummaryBlock {
  scenario: string;
  end_year: number;
  mean_end: number;
  median_end: number;
  mean_2050: number;
  median_2050: number;
}

export interface AlignResponse {
  provenance: {
    engine_version: string;
    mode: string;
    seed: number;
    config_hash: string;
    scenario_ids: string[];
    adjustment_factor: number;
    chain_id?: string;
    model_id?: string;
  };
  warnings: string[];
  results: Record<string, { band: BandPayload; summary: SummaryBlock }>;
}

export interface ScenarioInfo {
  id: string;
  first_year: number;
  last_year: number;
  n_gases: number;
}
