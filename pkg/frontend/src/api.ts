/** Thin typed client over the service HTTP API (the only backend). */

import type {
  AssetSetsResponse,
  LayersResponse,
  MutationResponse,
  PropertyValue,
  RenderResponse,
  SceneDocument,
  SessionResponse,
  UploadResponse,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
    this.status = status;
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let detail = `${response.status} ${response.statusText}`;
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status line
  }
  return new ApiError(response.status, detail);
}

export class ApiClient {
  readonly baseUrl: string;

  constructor(baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  /** Artifact URLs come back host-relative; anchor them to the service. */
  absolute(path: string): string {
    return path.startsWith("http") ? path : this.baseUrl + path;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  createSession(length: number, seed: number): Promise<SessionResponse> {
    return this.request("POST", "/sessions", { length, seed });
  }

  getDocument(sessionId: string): Promise<SceneDocument> {
    return this.request("GET", `/sessions/${sessionId}/document`);
  }

  applyLayers(
    sessionId: string,
    layers: string[],
    params?: Record<string, unknown>,
  ): Promise<MutationResponse> {
    const body: Record<string, unknown> = { layers };
    if (params !== undefined) body["params"] = params;
    return this.request("POST", `/sessions/${sessionId}/layers/apply`, body);
  }

  patchNode(
    sessionId: string,
    nodeId: number,
    property: string,
    value: PropertyValue,
  ): Promise<MutationResponse> {
    return this.request("PATCH", `/sessions/${sessionId}/nodes/${nodeId}`, { property, value });
  }

  render(sessionId: string): Promise<RenderResponse> {
    return this.request("POST", `/sessions/${sessionId}/render`);
  }

  listLayers(): Promise<LayersResponse> {
    return this.request("GET", "/layers");
  }

  listAssetSets(): Promise<AssetSetsResponse> {
    return this.request("GET", "/assets/sets");
  }

  async uploadAssets(setName: string, files: File[]): Promise<UploadResponse> {
    const form = new FormData();
    for (const file of files) form.append("files", file, file.name);
    const response = await fetch(`${this.baseUrl}/assets/sets/${setName}`, {
      method: "POST",
      body: form,
    });
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as UploadResponse;
  }
}
