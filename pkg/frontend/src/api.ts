/** Service client with per-panel request tokens; stale responses are dropped. */

import type { AlignRequest, AlignResponse, ScenarioInfo } from "./types.js";

export type FetchLike = (url: string, init?: {
  method?: string;
  headers?: Record<string, string>;
  body?: string;
}) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export class ServiceError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

/**
 * One panel, at most one *relevant* request: every submission takes a fresh
 * token and only the newest token's response is delivered. A slow earlier
 * response resolves to null instead of overwriting newer results.
 */
export class AlignPanel {
  private token = 0;

  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike,
  ) {}

  get currentToken(): number {
    return this.token;
  }

  async submit(request: AlignRequest): Promise<AlignResponse | null> {
    const mine = ++this.token;
    const response = await this.fetchFn(`${this.baseUrl}/align`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    });
    if (mine !== this.token) {
      return null; // superseded while in flight
    }
    if (!response.ok) {
      const detail = await response.json().catch(() => ({}));
      throw new ServiceError(
        response.status,
        JSON.stringify((detail as { detail?: unknown }).detail ?? detail),
      );
    }
    const doc = (await response.json()) as AlignResponse;
    if (mine !== this.token) {
      return null;
    }
    return doc;
  }
}

export async function fetchScenarios(
  baseUrl: string,
  fetchFn: FetchLike,
): Promise<ScenarioInfo[]> {
  const response = await fetchFn(`${baseUrl}/scenarios`);
  if (!response.ok) {
    throw new ServiceError(response.status, "scenario catalog unavailable");
  }
  const doc = (await response.json()) as { scenarios: ScenarioInfo[] };
  return doc.scenarios;
}
