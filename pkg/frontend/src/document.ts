/** Read-only helpers over the scene document. */

import type { DocumentNode, PropertyValue, SceneDocument } from "./types.js";
import type { Point, Rect, Viewport } from "./geometry.js";
import { IDENTITY_VIEWPORT, hitRect, rectContains } from "./geometry.js";

export function nodesById(doc: SceneDocument): Map<number, DocumentNode> {
  return new Map(doc.nodes.map((node) => [node.id, node]));
}

export function findNode(doc: SceneDocument, id: number): DocumentNode | null {
  return doc.nodes.find((node) => node.id === id) ?? null;
}

export function panels(doc: SceneDocument): DocumentNode[] {
  const byId = nodesById(doc);
  const root = byId.get(doc.root);
  if (!root) return [];
  const out: DocumentNode[] = [];
  for (const childId of root.children) {
    const child = byId.get(childId);
    if (child && child.type === "Panel") out.push(child);
  }
  return out;
}

/** Depth-first panel subtree, panel node excluded. */
export function subtree(doc: SceneDocument, panelId: number): DocumentNode[] {
  const byId = nodesById(doc);
  const out: DocumentNode[] = [];
  const stack = [...(byId.get(panelId)?.children ?? [])];
  while (stack.length > 0) {
    const id = stack.shift()!;
    const node = byId.get(id);
    if (!node) continue;
    out.push(node);
    stack.unshift(...node.children);
  }
  return out;
}

function num(value: PropertyValue | undefined, fallback: number): number {
  return typeof value === "number" ? value : fallback;
}

function pair(value: PropertyValue | undefined, fallback: Point): Point {
  if (Array.isArray(value) && value.length === 2) {
    return { x: value[0], y: value[1] };
  }
  return fallback;
}

export interface PanelBadge {
  phase: string | null;
  tension: number | null;
}

export function panelBadge(panel: DocumentNode): PanelBadge {
  const phase = panel.properties["grammar_phase"];
  const tension = panel.properties["tension"];
  return {
    phase: typeof phase === "string" ? phase : null,
    tension: typeof tension === "number" ? tension : null,
  };
}

export function viewportOf(panel: DocumentNode): Viewport {
  const zoom = num(panel.properties["viewport_zoom"], 1);
  if (zoom === 1) return IDENTITY_VIEWPORT;
  return {
    dx: num(panel.properties["viewport_dx"], 0),
    dy: num(panel.properties["viewport_dy"], 0),
    zoom,
  };
}

const DRAGGABLE_TYPES = new Set(["Character", "custom:Object"]);

export interface HitRegion {
  nodeId: number;
  panelIndex: number;
  panelId: number;
  nodeType: string;
  position: Point;
  rect: Rect;
  draggable: boolean;
}

/** Hit regions for the whole strip, in draw order (later wins on overlap). */
export function buildHitMap(doc: SceneDocument): HitRegion[] {
  const regions: HitRegion[] = [];
  panels(doc).forEach((panel, index) => {
    const vp = viewportOf(panel);
    for (const node of subtree(doc, panel.id)) {
      if (node.properties["visible"] === false) continue;
      if (node.type !== "Character" && node.type !== "custom:Object" && node.type !== "Symbol") {
        continue;
      }
      const position = pair(node.properties["position"], { x: 0.5, y: 0.5 });
      const rect = hitRect(index, node.type, position, num(node.properties["scale"], 1), vp);
      if (rect === null) continue;
      regions.push({
        nodeId: node.id,
        panelIndex: index,
        panelId: panel.id,
        nodeType: node.type,
        position,
        rect,
        draggable: DRAGGABLE_TYPES.has(node.type),
      });
    }
  });
  return regions;
}

export function hitTest(regions: HitRegion[], x: number, y: number): HitRegion | null {
  for (let i = regions.length - 1; i >= 0; i--) {
    const region = regions[i]!;
    if (rectContains(region.rect, x, y)) return region;
  }
  return null;
}

/** A short label for the selection panel: name plus interesting properties. */
export function describeNode(node: DocumentNode): string {
  const parts = [`#${node.id} ${node.type} "${node.name}"`];
  for (const key of ["identity", "action", "visual", "position", "grammar_phase", "tension"]) {
    const value = node.properties[key];
    if (value === undefined) continue;
    parts.push(`${key}=${Array.isArray(value) ? `[${value.map((v) => v.toFixed(2)).join(", ")}]` : value}`);
  }
  return parts.join("  ");
}
