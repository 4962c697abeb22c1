/** Thin typed client for the trace service; fetch is injectable for tests. */
import { CounterfactualPayload, DinesPayload, DominancePayload, Meta, TraceWindow } from "./types.js";

export type FetchLike = (url: string) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(private baseUrl = "", private fetchFn: FetchLike = (url) => fetch(url)) {}

  private async get<T>(path: string, params?: Record<string, number | undefined>): Promise<T> {
    const query = params
      ? Object.entries(params)
          .filter(([, v]) => v !== undefined)
          .map(([k, v]) => `${k}=${encodeURIComponent(String(v))}`)
          .join("&")
      : "";
    const url = `${this.baseUrl}${path}${query ? `?${query}` : ""}`;
    const resp = await this.fetchFn(url);
    if (!resp.ok) throw new ApiError(resp.status, `${path} answered ${resp.status}`);
    return (await resp.json()) as T;
  }

  meta(): Promise<Meta> {
    return this.get<Meta>("/api/meta");
  }

  trace(from: number, to: number): Promise<TraceWindow> {
    return this.get<TraceWindow>("/api/trace", { from, to });
  }

  dines(rho: number, phi: number, from: number, to: number): Promise<DinesPayload> {
    return this.get<DinesPayload>("/api/dines", { rho, phi, from, to });
  }

  dominance(t: number): Promise<DominancePayload> {
    return this.get<DominancePayload>(`/api/dominance/${t}`);
  }

  counterfactual(t: number, rho?: number): Promise<CounterfactualPayload> {
    return this.get<CounterfactualPayload>(`/api/counterfactual/${t}`, { rho });
  }

  async postThresholds(rho: number, phi: number): Promise<{ rho: number; phi: number }> {
    const resp = await fetch(`${this.baseUrl}/api/thresholds`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ rho, phi }),
    });
    if (!resp.ok) throw new ApiError(resp.status, `POST /api/thresholds answered ${resp.status}`);
    return (await resp.json()) as { rho: number; phi: number };
  }
}
