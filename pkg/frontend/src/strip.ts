/** Canvas strip view: server-rendered panel PNGs plus client overlays.
 *
 * The canvas only ever shows images the server rendered; the overlay
 * draws selection outlines and drag ghosts from document geometry, so
 * there is no client-side compositing to drift out of sync.
 */

import type { HitRegion } from "./document.js";
import { GUTTER, PANEL_SIZE, panelOriginX, stripWidth } from "./geometry.js";
import type { Rect } from "./geometry.js";

export class StripView {
  readonly canvas: HTMLCanvasElement;
  private images: HTMLImageElement[] = [];
  private regions: HitRegion[] = [];
  private selectedId: number | null = null;
  private ghost: Rect | null = null;

  constructor(canvas: HTMLCanvasElement) {
    this.canvas = canvas;
    this.canvas.width = 0;
    this.canvas.height = PANEL_SIZE;
  }

  setPanelUrls(urls: string[]): void {
    this.canvas.width = stripWidth(urls.length);
    this.images = urls.map((url) => {
      const image = new Image();
      image.onload = () => this.draw();
      image.src = url;
      return image;
    });
    this.draw();
  }

  setRegions(regions: HitRegion[]): void {
    this.regions = regions;
    this.draw();
  }

  setSelection(nodeId: number | null): void {
    this.selectedId = nodeId;
    this.draw();
  }

  setGhost(rect: Rect | null): void {
    this.ghost = rect;
    this.draw();
  }

  /** Pointer event -> strip coordinates (canvas is drawn 1:1). */
  stripPoint(event: MouseEvent): { x: number; y: number } {
    const bounds = this.canvas.getBoundingClientRect();
    return { x: event.clientX - bounds.left, y: event.clientY - bounds.top };
  }

  draw(): void {
    // jsdom has no 2D context; state-driven logic must not depend on paint.
    const ctx = this.canvas.getContext("2d");
    if (ctx === null) return;
    ctx.fillStyle = "#d8d8d8";
    ctx.fillRect(0, 0, this.canvas.width, this.canvas.height);
    this.images.forEach((image, index) => {
      const x = panelOriginX(index);
      if (image.complete && image.naturalWidth > 0) {
        ctx.drawImage(image, x, 0, PANEL_SIZE, PANEL_SIZE);
      } else {
        ctx.fillStyle = "#ffffff";
        ctx.fillRect(x, 0, PANEL_SIZE, PANEL_SIZE);
      }
      if (index > 0) {
        ctx.fillStyle = "#d8d8d8";
        ctx.fillRect(x - GUTTER, 0, GUTTER, PANEL_SIZE);
      }
    });
    if (this.selectedId !== null) {
      const region = this.regions.find((r) => r.nodeId === this.selectedId);
      if (region) {
        ctx.strokeStyle = "#1a73e8";
        ctx.lineWidth = 3;
        ctx.strokeRect(region.rect.x, region.rect.y, region.rect.w, region.rect.h);
      }
    }
    if (this.ghost !== null) {
      ctx.strokeStyle = "#1a73e8";
      ctx.setLineDash([6, 4]);
      ctx.strokeRect(this.ghost.x, this.ghost.y, this.ghost.w, this.ghost.h);
      ctx.setLineDash([]);
    }
  }
}
