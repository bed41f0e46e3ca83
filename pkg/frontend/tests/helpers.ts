/** Shared fixtures: a document builder and a fake service behind fetch.
 *
 * The fake mirrors the wire contract the client depends on (paths,
 * response shapes, one revision bump per mutation) without any of the
 * narrative machinery behind it.
 */

import type { DocumentNode, PropertyValue, SceneDocument } from "../src/types.js";

export interface ChildSpec {
  type: string;
  name: string;
  props?: Record<string, PropertyValue>;
}

export interface PanelSpec {
  props?: Record<string, PropertyValue>;
  children?: ChildSpec[];
}

export function buildDocument(
  panels: PanelSpec[],
  opts: { seed?: number; revision?: number } = {},
): SceneDocument {
  const root: DocumentNode = {
    children: [],
    id: 0,
    name: "sequence",
    parent: null,
    properties: {},
    type: "Sequence",
  };
  const nodes: DocumentNode[] = [root];
  let id = 1;
  panels.forEach((spec, index) => {
    const panel: DocumentNode = {
      children: [],
      id: id++,
      name: `panel_${index}`,
      parent: 0,
      properties: { ...(spec.props ?? {}) },
      type: "Panel",
    };
    root.children.push(panel.id);
    nodes.push(panel);
    for (const child of spec.children ?? []) {
      const node: DocumentNode = {
        children: [],
        id: id++,
        name: child.name,
        parent: panel.id,
        properties: { ...(child.props ?? {}) },
        type: child.type,
      };
      panel.children.push(node.id);
      nodes.push(node);
    }
  });
  return { nodes, revision: opts.revision ?? 0, root: 0, seed: opts.seed ?? 42 };
}

/** Minimal Response stand-in; the client only touches these members. */
export function jsonResponse(status: number, body: unknown, statusText = ""): Response {
  return {
    ok: status >= 200 && status < 300,
    status,
    statusText,
    json: () => Promise.resolve(body),
  } as unknown as Response;
}

const PHASES = ["E", "I", "L", "P", "R"];
const TENSIONS = [0, 2, 4, 6, 2];

function clone(doc: SceneDocument): SceneDocument {
  return JSON.parse(JSON.stringify(doc)) as SceneDocument;
}

export class FakeService {
  document: SceneDocument;
  layers = ["grammar", "arc", "action", "transition", "symbol", "redraw"];
  sets: Record<string, string[]> = { characters: ["char_a", "char_b"], scenes: ["garden"] };

  applies: Array<{ layers: string[]; params?: unknown }> = [];
  patches: Array<{ nodeId: number; body: { property: string; value: PropertyValue } }> = [];
  uploads: Array<{ set: string; names: string[] }> = [];
  renderCount = 0;

  /** When set, the next layers/apply responds 422 with this detail. */
  failNextApply: string | null = null;
  /** When true, the next layers/apply stalls until `releaseApply` is called. */
  holdNextApply = false;
  releaseApply: (() => void) | null = null;

  constructor(document: SceneDocument) {
    this.document = document;
  }

  /** Install as the global fetch for the duration of a test. */
  fetch = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = new URL(String(input));
    const method = (init?.method ?? "GET").toUpperCase();
    const body = typeof init?.body === "string" ? (JSON.parse(init.body) as never) : init?.body;
    return this.route(method, url.pathname, body);
  };

  private bump(): void {
    this.document = { ...this.document, revision: this.document.revision + 1 };
  }

  private panels(): DocumentNode[] {
    const byId = new Map(this.document.nodes.map((n) => [n.id, n]));
    const root = byId.get(this.document.root)!;
    return root.children.map((id) => byId.get(id)!).filter((n) => n.type === "Panel");
  }

  private async route(method: string, path: string, body: unknown): Promise<Response> {
    if (method === "POST" && path === "/sessions") {
      return jsonResponse(201, { session_id: "s1", document: this.document });
    }
    if (method === "GET" && path === "/layers") {
      return jsonResponse(200, { layers: this.layers });
    }
    if (method === "GET" && path === "/assets/sets") {
      return jsonResponse(200, { sets: this.sets });
    }
    if (method === "GET" && path === "/sessions/s1/document") {
      return jsonResponse(200, this.document);
    }
    if (method === "POST" && path === "/sessions/s1/layers/apply") {
      if (this.holdNextApply) {
        this.holdNextApply = false;
        await new Promise<void>((resolve) => {
          this.releaseApply = resolve;
        });
        this.releaseApply = null;
      }
      const request = body as { layers: string[]; params?: unknown };
      this.applies.push(request);
      if (this.failNextApply !== null) {
        const detail = this.failNextApply;
        this.failNextApply = null;
        return jsonResponse(422, { detail });
      }
      const unknown = request.layers.find((name) => !this.layers.includes(name));
      if (unknown !== undefined) {
        return jsonResponse(422, { detail: `no layer named "${unknown}"` });
      }
      const next = clone(this.document);
      this.document = next;
      const panels = this.panels();
      for (const name of request.layers) {
        panels.forEach((panel, index) => {
          if (name === "grammar") panel.properties["grammar_phase"] = PHASES[index % 5]!;
          if (name === "arc") panel.properties["tension"] = TENSIONS[index % 5]!;
        });
      }
      this.bump();
      return jsonResponse(200, { document: this.document, revision: this.document.revision });
    }
    const patchMatch = path.match(/^\/sessions\/s1\/nodes\/(\d+)$/);
    if (method === "PATCH" && patchMatch) {
      const nodeId = Number(patchMatch[1]);
      const request = body as { property: string; value: PropertyValue };
      this.patches.push({ nodeId, body: request });
      const next = clone(this.document);
      const node = next.nodes.find((n) => n.id === nodeId);
      if (!node) return jsonResponse(404, { detail: `no node ${nodeId}` });
      node.properties[request.property] = request.value;
      this.document = next;
      this.bump();
      return jsonResponse(200, { document: this.document, revision: this.document.revision });
    }
    if (method === "POST" && path === "/sessions/s1/render") {
      this.renderCount += 1;
      const rev = this.document.revision;
      return jsonResponse(200, {
        strip_url: `/artifacts/s1/${rev}/strip.png`,
        panel_urls: this.panels().map((_, i) => `/artifacts/s1/${rev}/panel_${i}.png`),
        document: this.document,
      });
    }
    const uploadMatch = path.match(/^\/assets\/sets\/([^/]+)$/);
    if (method === "POST" && uploadMatch) {
      const form = body as FormData;
      const names = form.getAll("files").map((f) => (f as File).name);
      const setName = uploadMatch[1]!;
      const labels = names.map((n) => n.replace(/\.png$/, ""));
      this.uploads.push({ set: setName, names });
      this.sets[setName] = [...(this.sets[setName] ?? []), ...labels];
      return jsonResponse(201, { added: names.length, labels: this.sets[setName] });
    }
    return jsonResponse(404, { detail: `no route ${method} ${path}` });
  }
}

/** Poll until `cond` holds; fails loudly instead of hanging the suite. */
export async function until(cond: () => boolean, what = "condition"): Promise<void> {
  for (let i = 0; i < 400; i++) {
    if (cond()) return;
    await new Promise((resolve) => setTimeout(resolve, 5));
  }
  throw new Error(`timed out waiting for ${what}`);
}
