/** Wire types for the comic service API. The document is authoritative:
 * the client renders what the server returns and never derives story
 * state on its own. */

export type PropertyValue = boolean | number | string | [number, number];

export interface DocumentNode {
  children: number[];
  id: number;
  name: string;
  parent: number | null;
  properties: Record<string, PropertyValue>;
  type: string;
}

export interface SceneDocument {
  nodes: DocumentNode[];
  revision: number;
  root: number;
  seed: number;
  structure?: { flat: string[]; tree: unknown };
  transitions?: (string | null)[];
}

export interface SessionResponse {
  session_id: string;
  document: SceneDocument;
}

export interface MutationResponse {
  document: SceneDocument;
  revision: number;
}

export interface RenderResponse {
  strip_url: string | null;
  panel_urls: string[];
  document: SceneDocument;
}

export interface LayersResponse {
  layers: string[];
}

export interface AssetSetsResponse {
  sets: Record<string, string[]>;
}

export interface UploadResponse {
  added: number;
  labels: string[];
}
