import { describe, expect, test } from "vitest";
import { ApiClient, ApiError } from "../src/api.js";

interface Recorded { url: string; init?: RequestInit; }

function fakeFetch(status: number, body: unknown, log: Recorded[]) {
  return async (url: string, init?: RequestInit): Promise<Response> => {
    log.push({ url, init });
    return {
      ok: status < 400,
      status,
      json: async () => body,
    } as Response;
  };
}

describe("ApiClient", () => {
  test("getZones unwraps the zones array", async () => {
    const log: Recorded[] = [];
    const api = new ApiClient("http://api", fakeFetch(200, { zones: [{ id: "school" }] }, log));
    const zones = await api.getZones();
    expect(zones).toEqual([{ id: "school" }]);
    expect(log[0].url).toBe("http://api/zones");
  });

  test("putZone sends a JSON PUT", async () => {
    const log: Recorded[] = [];
    const api = new ApiClient("", fakeFetch(200, { id: "school" }, log));
    await api.putZone("school", { limit: 30 });
    expect(log[0].url).toBe("/zones/school");
    expect(log[0].init?.method).toBe("PUT");
    expect(JSON.parse(log[0].init?.body as string)).toEqual({ limit: 30 });
  });

  test("setEmergency posts the flag", async () => {
    const log: Recorded[] = [];
    const api = new ApiClient("", fakeFetch(200, {}, log));
    await api.setEmergency("hospital", true);
    expect(log[0].url).toBe("/zones/hospital/emergency");
    expect(JSON.parse(log[0].init?.body as string)).toEqual({ on: true });
  });

  test("errors carry status and field", async () => {
    const api = new ApiClient("", fakeFetch(400, { error: "limit: -5 must be positive", field: "limit" }, []));
    const err = await api.putZone("school", { limit: -5 }).catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(400);
    expect(err.field).toBe("limit");
  });

  test("sim command includes extras", async () => {
    const log: Recorded[] = [];
    const api = new ApiClient("", fakeFetch(200, {}, log));
    await api.sim("step", { ticks: 10 });
    expect(JSON.parse(log[0].init?.body as string)).toEqual({ action: "step", ticks: 10 });
  });
});
