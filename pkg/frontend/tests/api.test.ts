import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

function capturingFetch(status = 200, payload: unknown = {}) {
  const seen: { url: string; init: RequestInit }[] = [];
  const fetchFn = (async (url: string, init: RequestInit) => {
    seen.push({ url, init });
    return {
      ok: status < 400,
      status,
      json: async () => payload,
    } as Response;
  }) as unknown as typeof fetch;
  return { seen, fetchFn };
}

describe("api client", () => {
  it("sends the bearer token and an idempotency key on mutations", async () => {
    const { seen, fetchFn } = capturingFetch(200, { session: {} });
    const api = new ApiClient({ baseUrl: "http://api.test/", token: "tok-x", fetchFn });
    await api.createSession("alice");

    expect(seen[0].url).toBe("http://api.test/sessions");
    const headers = seen[0].init.headers as Record<string, string>;
    expect(headers.Authorization).toBe("Bearer tok-x");
    expect(headers["Idempotency-Key"]).toBeTruthy();
    expect(JSON.parse(seen[0].init.body as string)).toEqual({ client_id: "alice" });
  });

  it("reads without a body and without an idempotency key", async () => {
    const { seen, fetchFn } = capturingFetch(200, { rows: [] });
    const api = new ApiClient({ baseUrl: "http://api.test", token: "tok-x", fetchFn });
    await api.getBrushStats("alice");

    expect(seen[0].url).toBe("http://api.test/clients/alice/brush-stats");
    expect(seen[0].init.body).toBeUndefined();
    const headers = seen[0].init.headers as Record<string, string>;
    expect(headers["Idempotency-Key"]).toBeUndefined();
  });

  it("maps error envelopes onto ApiError", async () => {
    const { fetchFn } = capturingFetch(403, {
      error: { code: "unauthorized", message: "not your client" },
    });
    const api = new ApiClient({ baseUrl: "http://api.test", token: "tok-x", fetchFn });
    const failure = await api.getProfile("alice").catch((e) => e);
    expect(failure).toBeInstanceOf(ApiError);
    expect(failure.status).toBe(403);
    expect(failure.code).toBe("unauthorized");
    expect(failure.message).toBe("not your client");
  });

  it("builds file urls for stored refs", () => {
    const api = new ApiClient({ baseUrl: "http://api.test", token: "t" });
    expect(api.fileUrl("images/a.png")).toBe("http://api.test/files/images/a.png");
  });
});
