/** Wires the store, API client and strip view into the editor page.
 *
 * Every interaction follows the same shape: gate on the single-flight
 * mutation lock, call the service, adopt the returned document, then
 * refresh the rendered artifacts. Nothing narrative is computed here.
 */

import { ApiClient, ApiError } from "./api.js";
import {
  buildHitMap,
  describeNode,
  findNode,
  hitTest,
  panelBadge,
  panels,
  viewportOf,
} from "./document.js";
import type { HitRegion } from "./document.js";
import { clamp01, hitRect, toPanelFraction } from "./geometry.js";
import type { Point } from "./geometry.js";
import { SessionStore } from "./state.js";
import { StripView } from "./strip.js";
import type { SceneDocument } from "./types.js";

export interface AppOptions {
  length: number;
  seed: number;
}

const REDRAWABLE = new Set(["Character", "Scene"]);

export class App {
  readonly store = new SessionStore();
  readonly api: ApiClient;
  private readonly root: HTMLElement;
  private readonly options: AppOptions;

  private strip!: StripView;
  private badges!: HTMLElement;
  private layerBar!: HTMLElement;
  private assetsBar!: HTMLElement;
  private revisionLabel!: HTMLElement;
  private noticeBox!: HTMLElement;
  private selectionInfo!: HTMLElement;
  private promptInput!: HTMLInputElement;

  private regions: HitRegion[] = [];
  private dragStartFraction: Point | null = null;

  constructor(root: HTMLElement, api: ApiClient, options: AppOptions) {
    this.root = root;
    this.api = api;
    this.options = options;
  }

  async init(): Promise<void> {
    this.buildSkeleton();
    this.store.subscribe(() => this.sync());
    try {
      const [layerList, assetSets] = await Promise.all([
        this.api.listLayers(),
        this.api.listAssetSets(),
      ]);
      this.buildLayerButtons(layerList.layers);
      this.buildAssetColumns(assetSets.sets);
      const session = await this.api.createSession(this.options.length, this.options.seed);
      this.store.startSession(session.session_id, session.document);
      await this.refreshArtifacts();
    } catch (error) {
      this.store.setNotice(messageOf(error));
    }
  }

  // --- DOM scaffolding ------------------------------------------------------

  private buildSkeleton(): void {
    this.root.innerHTML = "";

    const toolbar = el("div", "toolbar");
    this.layerBar = el("div", "layer-buttons");
    toolbar.appendChild(this.layerBar);

    const redrawBox = el("div", "redraw-box");
    this.promptInput = document.createElement("input");
    this.promptInput.type = "text";
    this.promptInput.className = "redraw-prompt";
    this.promptInput.placeholder = "redraw prompt for the selected element";
    const redrawBtn = el("button", "redraw-btn");
    redrawBtn.textContent = "redraw";
    redrawBtn.addEventListener("click", () => void this.runRedraw());
    redrawBox.appendChild(this.promptInput);
    redrawBox.appendChild(redrawBtn);
    toolbar.appendChild(redrawBox);

    this.revisionLabel = el("span", "revision-label");
    toolbar.appendChild(this.revisionLabel);
    this.root.appendChild(toolbar);

    this.noticeBox = el("div", "notice");
    this.noticeBox.hidden = true;
    const noticeText = el("span", "notice-text");
    const dismiss = el("button", "notice-dismiss");
    dismiss.textContent = "×";
    dismiss.addEventListener("click", () => this.store.setNotice(null));
    this.noticeBox.appendChild(noticeText);
    this.noticeBox.appendChild(dismiss);
    this.root.appendChild(this.noticeBox);

    const body = el("div", "editor-body");
    this.assetsBar = el("div", "asset-columns");
    body.appendChild(this.assetsBar);

    const stripWrap = el("div", "strip-wrap");
    this.badges = el("div", "badges");
    stripWrap.appendChild(this.badges);
    const canvas = document.createElement("canvas");
    canvas.className = "strip-canvas";
    stripWrap.appendChild(canvas);
    this.selectionInfo = el("div", "selection-info");
    stripWrap.appendChild(this.selectionInfo);
    body.appendChild(stripWrap);
    this.root.appendChild(body);

    this.strip = new StripView(canvas);
    canvas.addEventListener("mousedown", (event) => this.onMouseDown(event));
    window.addEventListener("mousemove", (event) => this.onMouseMove(event));
    window.addEventListener("mouseup", (event) => void this.onMouseUp(event));
  }

  private buildLayerButtons(layers: string[]): void {
    this.layerBar.innerHTML = "";
    for (const name of layers) {
      const button = document.createElement("button");
      button.className = "layer-btn";
      button.dataset["layer"] = name;
      button.textContent = name;
      if (name === "redraw") {
        // redraw needs a target; the prompt box drives it instead
        button.disabled = true;
        button.title = "select an element and use the redraw prompt";
      } else {
        button.addEventListener("click", () => void this.runLayer(name));
      }
      this.layerBar.appendChild(button);
    }
  }

  private buildAssetColumns(sets: Record<string, string[]>): void {
    this.assetsBar.innerHTML = "";
    for (const [setName, labels] of Object.entries(sets)) {
      const column = el("div", "asset-column");
      column.dataset["set"] = setName;
      const title = el("h3", "asset-title");
      title.textContent = setName;
      column.appendChild(title);
      const list = el("ul", "asset-list");
      for (const label of labels) {
        const item = el("li", "asset-item");
        item.textContent = label;
        list.appendChild(item);
      }
      column.appendChild(list);

      const input = document.createElement("input");
      input.type = "file";
      input.accept = "image/png";
      input.multiple = true;
      input.className = "asset-upload";
      input.addEventListener("change", () => {
        const files = input.files ? Array.from(input.files) : [];
        input.value = "";
        if (files.length > 0) void this.uploadFiles(setName, files);
      });
      column.appendChild(input);
      this.assetsBar.appendChild(column);
    }
  }

  // --- store -> DOM ---------------------------------------------------------

  private sync(): void {
    const state = this.store.current;
    this.revisionLabel.textContent = `rev ${state.revision}`;

    const noticeText = this.noticeBox.querySelector(".notice-text");
    if (noticeText) noticeText.textContent = state.notice ?? "";
    this.noticeBox.hidden = state.notice === null;

    for (const button of this.layerBar.querySelectorAll<HTMLButtonElement>(".layer-btn")) {
      if (button.dataset["layer"] !== "redraw") button.disabled = state.busy;
    }

    if (state.document !== null) {
      this.regions = buildHitMap(state.document);
      this.strip.setRegions(this.regions);
      this.renderBadges(state.document);
    }
    this.strip.setSelection(state.selectedNodeId);
    this.renderSelectionInfo();
    this.renderDragGhost();
  }

  private renderBadges(doc: SceneDocument): void {
    this.badges.innerHTML = "";
    for (const panel of panels(doc)) {
      const badge = panelBadge(panel);
      const span = el("span", "badge");
      span.dataset["phase"] = badge.phase ?? "";
      span.dataset["tension"] = badge.tension === null ? "" : String(badge.tension);
      span.textContent =
        badge.phase === null ? "·" : `${badge.phase} ${badge.tension ?? ""}`.trim();
      this.badges.appendChild(span);
    }
  }

  private renderSelectionInfo(): void {
    const state = this.store.current;
    if (state.document === null || state.selectedNodeId === null) {
      this.selectionInfo.textContent = "";
      return;
    }
    const node = findNode(state.document, state.selectedNodeId);
    this.selectionInfo.textContent = node === null ? "" : describeNode(node);
  }

  private renderDragGhost(): void {
    const state = this.store.current;
    if (state.drag === null || state.document === null) {
      this.strip.setGhost(null);
      return;
    }
    const region = this.regions.find((r) => r.nodeId === state.drag!.nodeId);
    if (!region) {
      this.strip.setGhost(null);
      return;
    }
    const panel = panels(state.document)[state.drag.panelIndex];
    const vp = panel ? viewportOf(panel) : { dx: 0, dy: 0, zoom: 1 };
    const node = findNode(state.document, state.drag.nodeId);
    const scale = typeof node?.properties["scale"] === "number" ? node.properties["scale"] : 1;
    this.strip.setGhost(
      hitRect(state.drag.panelIndex, region.nodeType, state.drag.current, scale, vp),
    );
  }

  // --- interactions ---------------------------------------------------------

  private onMouseDown(event: MouseEvent): void {
    const state = this.store.current;
    if (state.busy || state.document === null) return;
    const point = this.strip.stripPoint(event);
    const hit = hitTest(this.regions, point.x, point.y);
    if (hit === null) {
      this.store.select(null); // empty gutter or background clears
      return;
    }
    this.store.select(hit.nodeId);
    if (!hit.draggable) return;
    const panel = panels(state.document)[hit.panelIndex];
    if (!panel) return;
    this.dragStartFraction = toPanelFraction(
      hit.panelIndex,
      point.x,
      point.y,
      viewportOf(panel),
    );
    this.store.beginDrag({
      nodeId: hit.nodeId,
      panelIndex: hit.panelIndex,
      start: point,
      origin: hit.position,
      current: hit.position,
    });
  }

  private onMouseMove(event: MouseEvent): void {
    const state = this.store.current;
    if (state.drag === null || state.document === null || this.dragStartFraction === null) return;
    const panel = panels(state.document)[state.drag.panelIndex];
    if (!panel) return;
    const point = this.strip.stripPoint(event);
    // The drag stays bound to its panel: crossing a gutter clamps rather
    // than re-targeting, and coordinates stay valid panel fractions.
    const cursor = toPanelFraction(state.drag.panelIndex, point.x, point.y, viewportOf(panel));
    // Delta first: an axis the cursor has not moved on stays bit-identical
    // to its origin instead of picking up float noise.
    this.store.moveDrag({
      x: clamp01(state.drag.origin.x + (cursor.x - this.dragStartFraction.x)),
      y: clamp01(state.drag.origin.y + (cursor.y - this.dragStartFraction.y)),
    });
  }

  private async onMouseUp(_event: MouseEvent): Promise<void> {
    const drag = this.store.endDrag();
    this.dragStartFraction = null;
    if (drag === null) return;
    const moved = drag.current.x !== drag.origin.x || drag.current.y !== drag.origin.y;
    if (!moved) return;
    const state = this.store.current;
    if (state.sessionId === null || !this.store.beginMutation()) return;
    try {
      const response = await this.api.patchNode(state.sessionId, drag.nodeId, "position", [
        drag.current.x,
        drag.current.y,
      ]);
      this.store.acceptDocument(response.document);
      await this.refreshArtifacts();
    } catch (error) {
      // Nothing was adopted, so the sprite falls back to its server
      // position on the next draw; just surface the failure.
      this.store.setNotice(messageOf(error));
    } finally {
      this.store.endMutation();
    }
  }

  // --- mutations ------------------------------------------------------------

  async runLayer(name: string): Promise<void> {
    const state = this.store.current;
    if (state.sessionId === null || !this.store.beginMutation()) return;
    try {
      const response = await this.api.applyLayers(state.sessionId, [name]);
      this.store.acceptDocument(response.document);
      await this.refreshArtifacts();
    } catch (error) {
      this.store.setNotice(messageOf(error));
    } finally {
      this.store.endMutation();
    }
  }

  async runRedraw(): Promise<void> {
    const state = this.store.current;
    if (state.sessionId === null || state.document === null) return;
    if (state.selectedNodeId === null) {
      this.store.setNotice("select a character or scene to redraw");
      return;
    }
    const node = findNode(state.document, state.selectedNodeId);
    if (node === null || !REDRAWABLE.has(node.type)) {
      this.store.setNotice("redraw works on characters and scenes");
      return;
    }
    if (!this.store.beginMutation()) return;
    try {
      const response = await this.api.applyLayers(state.sessionId, ["redraw"], {
        target: node.id,
        prompt: this.promptInput.value,
      });
      this.store.acceptDocument(response.document);
      await this.refreshArtifacts();
    } catch (error) {
      this.store.setNotice(messageOf(error));
    } finally {
      this.store.endMutation();
    }
  }

  async uploadFiles(setName: string, files: File[]): Promise<void> {
    if (!this.store.beginMutation()) return;
    try {
      await this.api.uploadAssets(setName, files);
      const sets = await this.api.listAssetSets();
      this.buildAssetColumns(sets.sets);
    } catch (error) {
      this.store.setNotice(messageOf(error));
    } finally {
      this.store.endMutation();
    }
  }

  /** Re-render on the server and point the strip at the new artifacts. */
  private async refreshArtifacts(): Promise<void> {
    const state = this.store.current;
    if (state.sessionId === null) return;
    const rendered = await this.api.render(state.sessionId);
    this.store.acceptDocument(rendered.document);
    this.store.setArtifacts(
      rendered.panel_urls.map((url) => this.api.absolute(url)),
      rendered.strip_url === null ? null : this.api.absolute(rendered.strip_url),
    );
    this.strip.setPanelUrls(this.store.current.panelUrls);
  }
}

function el(tag: string, className: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  return node;
}

function messageOf(error: unknown): string {
  if (error instanceof ApiError) return `${error.status}: ${error.message}`;
  return error instanceof Error ? error.message : String(error);
}
