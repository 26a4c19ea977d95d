/** Typed client for the tcmnn service endpoints. */

import { ErrorEnvelope, GridRequest, GridResponse } from "./types.js";

export class ServiceError extends Error {
  code: string;

  constructor(code: string, message: string) {
    super(message);
    this.code = code;
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private fetchImpl: FetchLike;
  private base: string;

  constructor(base = "", fetchImpl: FetchLike = fetch.bind(globalThis)) {
    this.base = base;
    this.fetchImpl = fetchImpl;
  }

  async health(): Promise<{ status: string; version: string }> {
    const resp = await this.fetchImpl(`${this.base}/api/health`);
    return (await resp.json()) as { status: string; version: string };
  }

  async grid(request: GridRequest, timeoutMs = 30_000): Promise<GridResponse> {
    const controller = new AbortController();
    const timer = setTimeout(() => controller.abort(), timeoutMs);
    let resp: Response;
    try {
      resp = await this.fetchImpl(`${this.base}/api/grid`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(request),
        signal: controller.signal,
      });
    } catch (err) {
      if ((err as Error).name === "AbortError") {
        throw new ServiceError("timeout", "the grid request timed out");
      }
      throw new ServiceError("network", String(err));
    } finally {
      clearTimeout(timer);
    }
    if (!resp.ok) {
      let code = "http_error";
      let message = `service answered ${resp.status}`;
      try {
        const body = (await resp.json()) as ErrorEnvelope;
        if (body.error) {
          code = body.error.code;
          message = body.error.message;
        }
      } catch {
        // non-JSON error body: keep the status text
      }
      throw new ServiceError(code, message);
    }
    return (await resp.json()) as GridResponse;
  }
}
