/** Strip layout and coordinate mapping.
 *
 * Mirrors the server's renderer: 512 px square panels joined left to
 * right with an 8 px gutter, and the same crop-and-scale viewport math,
 * so hit regions line up with the pixels the server actually drew.
 */

export const PANEL_SIZE = 512;
export const GUTTER = 8;

export interface Point {
  x: number;
  y: number;
}

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface Viewport {
  dx: number;
  dy: number;
  zoom: number;
}

export const IDENTITY_VIEWPORT: Viewport = { dx: 0, dy: 0, zoom: 1 };

export function clamp01(v: number): number {
  return Math.min(1, Math.max(0, v));
}

export function stripWidth(panelCount: number): number {
  if (panelCount < 1) return 0;
  return panelCount * PANEL_SIZE + (panelCount - 1) * GUTTER;
}

export function panelOriginX(index: number): number {
  return index * (PANEL_SIZE + GUTTER);
}

/** Panel index under a strip x coordinate, or null on a gutter / outside. */
export function panelAtX(x: number, panelCount: number): number | null {
  if (x < 0) return null;
  const cell = PANEL_SIZE + GUTTER;
  const index = Math.floor(x / cell);
  if (index >= panelCount) return null;
  const within = x - index * cell;
  return within < PANEL_SIZE ? index : null;
}

/** The source window the server crops before scaling back up to 512.
 * Rounding and clamping must match the renderer exactly. */
export function viewportWindow(vp: Viewport): Rect {
  if (vp.zoom === 1 && vp.dx === 0 && vp.dy === 0) {
    return { x: 0, y: 0, w: PANEL_SIZE, h: PANEL_SIZE };
  }
  const window = Math.max(1, Math.round(PANEL_SIZE / vp.zoom));
  const cx = (0.5 + vp.dx / 2) * PANEL_SIZE;
  const cy = (0.5 + vp.dy / 2) * PANEL_SIZE;
  let left = Math.round(cx - window / 2);
  let top = Math.round(cy - window / 2);
  left = Math.min(Math.max(left, 0), PANEL_SIZE - window);
  top = Math.min(Math.max(top, 0), PANEL_SIZE - window);
  return { x: left, y: top, w: window, h: window };
}

/** Strip pixel -> panel-fraction coordinates, inverting the viewport. */
export function toPanelFraction(index: number, stripX: number, stripY: number, vp: Viewport): Point {
  const screenX = stripX - panelOriginX(index);
  const win = viewportWindow(vp);
  const px = win.x + (screenX / PANEL_SIZE) * win.w;
  const py = win.y + (stripY / PANEL_SIZE) * win.h;
  return { x: px / PANEL_SIZE, y: py / PANEL_SIZE };
}

/** Panel-fraction -> strip pixel coordinates (forward viewport map). */
export function fromPanelFraction(index: number, fx: number, fy: number, vp: Viewport): Point {
  const win = viewportWindow(vp);
  const screenX = ((fx * PANEL_SIZE - win.x) / win.w) * PANEL_SIZE;
  const screenY = ((fy * PANEL_SIZE - win.y) / win.h) * PANEL_SIZE;
  return { x: panelOriginX(index) + screenX, y: screenY };
}

/** Nominal sprite extents as panel fractions at scale 1, matching the
 * bundled art. The client cannot measure server-side pixels, so hit
 * boxes use these; they are approximations for custom art. */
const NOMINAL_EXTENTS: Record<string, { w: number; h: number }> = {
  Character: { w: 160 / 512, h: 224 / 512 },
  "custom:Object": { w: 96 / 512, h: 96 / 512 },
  Symbol: { w: 128 / 512, h: 128 / 512 },
};

export function nominalExtent(nodeType: string): { w: number; h: number } | null {
  return NOMINAL_EXTENTS[nodeType] ?? null;
}

/** Screen-space hit rectangle for a sprite at `position` with `scale`
 * inside panel `index` under viewport `vp`. Null for types that do not
 * draw as sprites. */
export function hitRect(
  index: number,
  nodeType: string,
  position: Point,
  scale: number,
  vp: Viewport,
): Rect | null {
  const extent = nominalExtent(nodeType);
  if (extent === null) return null;
  const win = viewportWindow(vp);
  const screenScale = PANEL_SIZE / win.w;
  const center = fromPanelFraction(index, position.x, position.y, vp);
  const w = extent.w * scale * PANEL_SIZE * screenScale;
  const h = extent.h * scale * PANEL_SIZE * screenScale;
  return { x: center.x - w / 2, y: center.y - h / 2, w, h };
}

export function rectContains(rect: Rect, x: number, y: number): boolean {
  return x >= rect.x && x < rect.x + rect.w && y >= rect.y && y < rect.y + rect.h;
}
