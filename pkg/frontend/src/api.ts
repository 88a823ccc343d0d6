import type { StateSnapshot, Zone, ZonePatchBody } from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, message: string, public field?: string) {
    super(message);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(private base: string,
              private fetchFn: FetchLike = (...a) => fetch(...a)) {}

  private async request(path: string, init?: RequestInit): Promise<any> {
    const response = await this.fetchFn(this.base + path, init);
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      throw new ApiError(response.status,
                         body.error ?? `http ${response.status}`, body.field);
    }
    return body;
  }

  private post(path: string, payload: unknown, method = "POST"): Promise<any> {
    return this.request(path, {
      method,
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  async getZones(): Promise<Zone[]> {
    return (await this.request("/zones")).zones;
  }

  putZone(id: string, patch: ZonePatchBody): Promise<Zone> {
    return this.post(`/zones/${encodeURIComponent(id)}`, patch, "PUT");
  }

  setEmergency(id: string, on: boolean): Promise<Zone> {
    return this.post(`/zones/${encodeURIComponent(id)}/emergency`, { on });
  }

  getState(): Promise<StateSnapshot> {
    return this.request("/state");
  }

  sim(action: string, extra: Record<string, unknown> = {}): Promise<any> {
    return this.post("/sim", { action, ...extra });
  }

  loadScenario(doc: unknown): Promise<any> {
    return this.post("/scenario", doc);
  }
}
