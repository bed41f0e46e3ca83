import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { jsonResponse } from "./helpers.js";

interface Recorded {
  url: string;
  method: string;
  headers: Record<string, string> | undefined;
  body: unknown;
}

function record(response: Response): { calls: Recorded[] } {
  const calls: Recorded[] = [];
  vi.stubGlobal("fetch", (input: RequestInfo | URL, init?: RequestInit) => {
    calls.push({
      url: String(input),
      method: init?.method ?? "GET",
      headers: init?.headers as Record<string, string> | undefined,
      body: typeof init?.body === "string" ? JSON.parse(init.body) : init?.body,
    });
    return Promise.resolve(response);
  });
  return { calls };
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("ApiClient requests", () => {
  it("strips trailing slashes from the base url", () => {
    expect(new ApiClient("http://svc///").baseUrl).toBe("http://svc");
  });

  it("anchors relative artifact paths and passes absolute urls through", () => {
    const api = new ApiClient("http://svc");
    expect(api.absolute("/artifacts/s1/2/strip.png")).toBe("http://svc/artifacts/s1/2/strip.png");
    expect(api.absolute("http://cdn/x.png")).toBe("http://cdn/x.png");
  });

  it("posts session creation parameters as json", async () => {
    const { calls } = record(jsonResponse(201, { session_id: "s1", document: null }));
    await new ApiClient("http://svc").createSession(5, 42);
    expect(calls).toHaveLength(1);
    expect(calls[0]!.url).toBe("http://svc/sessions");
    expect(calls[0]!.method).toBe("POST");
    expect(calls[0]!.headers).toEqual({ "content-type": "application/json" });
    expect(calls[0]!.body).toEqual({ length: 5, seed: 42 });
  });

  it("omits params from apply bodies unless given", async () => {
    const { calls } = record(jsonResponse(200, { document: null, revision: 1 }));
    const api = new ApiClient("http://svc");
    await api.applyLayers("s1", ["grammar", "arc"]);
    await api.applyLayers("s1", ["redraw"], { target: 3, prompt: "winter coat" });
    expect(calls[0]!.url).toBe("http://svc/sessions/s1/layers/apply");
    expect(calls[0]!.body).toEqual({ layers: ["grammar", "arc"] });
    expect(calls[1]!.body).toEqual({
      layers: ["redraw"],
      params: { target: 3, prompt: "winter coat" },
    });
  });

  it("patches node properties with a property/value body", async () => {
    const { calls } = record(jsonResponse(200, { document: null, revision: 2 }));
    await new ApiClient("http://svc").patchNode("s1", 7, "position", [1, 0.62]);
    expect(calls[0]!.url).toBe("http://svc/sessions/s1/nodes/7");
    expect(calls[0]!.method).toBe("PATCH");
    expect(calls[0]!.body).toEqual({ property: "position", value: [1, 0.62] });
  });

  it("sends renders as bodyless posts", async () => {
    const { calls } = record(
      jsonResponse(200, { strip_url: null, panel_urls: [], document: null }),
    );
    await new ApiClient("http://svc").render("s1");
    expect(calls[0]!.url).toBe("http://svc/sessions/s1/render");
    expect(calls[0]!.method).toBe("POST");
    expect(calls[0]!.body).toBeUndefined();
    expect(calls[0]!.headers).toBeUndefined();
  });

  it("uploads files as multipart form data without forcing a content type", async () => {
    const { calls } = record(jsonResponse(201, { added: 1, labels: ["hat"] }));
    const file = new File([new Uint8Array([137, 80])], "hat.png", { type: "image/png" });
    await new ApiClient("http://svc").uploadAssets("props", [file]);
    expect(calls[0]!.url).toBe("http://svc/assets/sets/props");
    expect(calls[0]!.headers).toBeUndefined();
    const form = calls[0]!.body as FormData;
    expect(form.getAll("files").map((f) => (f as File).name)).toEqual(["hat.png"]);
  });
});

describe("ApiClient errors", () => {
  it("raises ApiError carrying the service detail", async () => {
    record(jsonResponse(422, { detail: 'no layer named "nosuch"' }));
    const api = new ApiClient("http://svc");
    const error = await api.applyLayers("s1", ["nosuch"]).catch((e: unknown) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect((error as ApiError).status).toBe(422);
    expect((error as ApiError).message).toBe('no layer named "nosuch"');
  });

  it("falls back to the status line for non-json error bodies", async () => {
    const broken = {
      ok: false,
      status: 502,
      statusText: "Bad Gateway",
      json: () => Promise.reject(new Error("not json")),
    } as unknown as Response;
    record(broken);
    const error = await new ApiClient("http://svc").render("s1").catch((e: unknown) => e);
    expect((error as ApiError).status).toBe(502);
    expect((error as ApiError).message).toBe("502 Bad Gateway");
  });
});
