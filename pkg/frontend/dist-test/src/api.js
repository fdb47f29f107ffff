"use strict";
/** Service client with per-panel request tokens; stale responses are dropped. */
Object.defineProperty(exports, "__esModule", { value: true });
exports.AlignPanel = exports.ServiceError = void 0;
exports.fetchScenarios = fetchScenarios;
class ServiceError extends Error {
    status;
    constructor(status, message) {
        super(message);
        this.status = status;
    }
}
exports.ServiceError = ServiceError;
/**
 * One panel, at most one *relevant* request: every submission takes a fresh
 * token and only the newest token's response is delivered. A slow earlier
 * response resolves to null instead of overwriting newer results.
 */
class AlignPanel {
    baseUrl;
    fetchFn;
    token = 0;
    constructor(baseUrl, fetchFn) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
    }
    get currentToken() {
        return this.token;
    }
    async submit(request) {
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
            throw new ServiceError(response.status, JSON.stringify(detail.detail ?? detail));
        }
        const doc = (await response.json());
        if (mine !== this.token) {
            return null;
        }
        return doc;
    }
}
exports.AlignPanel = AlignPanel;
async function fetchScenarios(baseUrl, fetchFn) {
    const response = await fetchFn(`${baseUrl}/scenarios`);
    if (!response.ok) {
        throw new ServiceError(response.status, "scenario catalog unavailable");
    }
    const doc = (await response.json());
    return doc.scenarios;
}
