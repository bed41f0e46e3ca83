import { describe, expect, it } from "vitest";

import {
  GUTTER,
  PANEL_SIZE,
  clamp01,
  fromPanelFraction,
  hitRect,
  nominalExtent,
  panelAtX,
  panelOriginX,
  rectContains,
  stripWidth,
  toPanelFraction,
  viewportWindow,
} from "../src/geometry.js";
import type { Viewport } from "../src/geometry.js";

const IDENTITY: Viewport = { dx: 0, dy: 0, zoom: 1 };

describe("strip layout", () => {
  it("computes strip width with gutters between panels", () => {
    expect(stripWidth(1)).toBe(512);
    expect(stripWidth(4)).toBe(4 * 512 + 3 * 8);
    expect(stripWidth(0)).toBe(0);
  });

  it("places panel origins one cell apart", () => {
    expect(panelOriginX(0)).toBe(0);
    expect(panelOriginX(1)).toBe(PANEL_SIZE + GUTTER);
    expect(panelOriginX(3)).toBe(3 * (PANEL_SIZE + GUTTER));
  });

  it("maps x coordinates to panels, gutters to null", () => {
    expect(panelAtX(0, 3)).toBe(0);
    expect(panelAtX(511, 3)).toBe(0);
    expect(panelAtX(512, 3)).toBeNull(); // first gutter pixel
    expect(panelAtX(519, 3)).toBeNull(); // last gutter pixel
    expect(panelAtX(520, 3)).toBe(1);
    expect(panelAtX(-1, 3)).toBeNull();
    expect(panelAtX(3 * 520, 3)).toBeNull(); // past the last panel
  });
});

describe("clamp01", () => {
  it("pins values into [0, 1]", () => {
    expect(clamp01(-0.5)).toBe(0);
    expect(clamp01(0)).toBe(0);
    expect(clamp01(0.25)).toBe(0.25);
    expect(clamp01(1)).toBe(1);
    expect(clamp01(9.7)).toBe(1);
  });
});

describe("viewportWindow", () => {
  // Expected windows were read off the server renderer by running its
  // crop math directly; these must stay bit-identical.
  it("is the full panel for the identity viewport", () => {
    expect(viewportWindow(IDENTITY)).toEqual({ x: 0, y: 0, w: 512, h: 512 });
  });

  it("matches the renderer for an off-center zoom", () => {
    expect(viewportWindow({ zoom: 1.8, dx: 0.4, dy: 0.4 })).toEqual({
      x: 216,
      y: 216,
      w: 284,
      h: 284,
    });
  });

  it("clamps at the bottom-right corner", () => {
    expect(viewportWindow({ zoom: 1.8, dx: 1, dy: 1 })).toEqual({
      x: 228,
      y: 228,
      w: 284,
      h: 284,
    });
  });

  it("clamps at the left edge", () => {
    expect(viewportWindow({ zoom: 1.8, dx: -1, dy: 0 })).toEqual({
      x: 0,
      y: 114,
      w: 284,
      h: 284,
    });
  });

  it("handles a centered 2x zoom", () => {
    expect(viewportWindow({ zoom: 2, dx: 0, dy: 0 })).toEqual({
      x: 128,
      y: 128,
      w: 256,
      h: 256,
    });
  });
});

describe("fraction <-> strip mapping", () => {
  it("maps panel centers under the identity viewport", () => {
    const p = fromPanelFraction(2, 0.5, 0.5, IDENTITY);
    expect(p.x).toBe(2 * 520 + 256);
    expect(p.y).toBe(256);
  });

  it("round-trips through arbitrary viewports", () => {
    const viewports: Viewport[] = [
      IDENTITY,
      { zoom: 1.8, dx: 0.4, dy: -0.2 },
      { zoom: 1.8, dx: 1, dy: 1 },
      { zoom: 2, dx: 0, dy: 0 },
    ];
    const fractions = [
      [0.1, 0.9],
      [0.5, 0.5],
      [0.73, 0.21],
    ];
    for (const vp of viewports) {
      for (const [fx, fy] of fractions) {
        const strip = fromPanelFraction(1, fx!, fy!, vp);
        const back = toPanelFraction(1, strip.x, strip.y, vp);
        expect(back.x).toBeCloseTo(fx!, 9);
        expect(back.y).toBeCloseTo(fy!, 9);
      }
    }
  });

  it("inverts the viewport when reading the cursor", () => {
    // Cursor at the panel center always means the window center.
    const vp: Viewport = { zoom: 1.8, dx: 0.4, dy: 0.4 };
    const center = toPanelFraction(0, 256, 256, vp);
    // window (216, 216, 284): center pixel 216 + 142 = 358 of 512
    expect(center.x).toBeCloseTo(358 / 512, 9);
    expect(center.y).toBeCloseTo(358 / 512, 9);
  });
});

describe("hitRect", () => {
  it("centers the nominal character box at the node position", () => {
    const rect = hitRect(0, "Character", { x: 0.5, y: 0.62 }, 1, IDENTITY);
    expect(rect).not.toBeNull();
    expect(rect!.x).toBeCloseTo(256 - 80, 9);
    expect(rect!.y).toBeCloseTo(0.62 * 512 - 112, 9);
    expect(rect!.w).toBeCloseTo(160, 9);
    expect(rect!.h).toBeCloseTo(224, 9);
  });

  it("scales the box and offsets by the panel origin", () => {
    const rect = hitRect(2, "custom:Object", { x: 0.5, y: 0.5 }, 2, IDENTITY)!;
    expect(rect.w).toBeCloseTo(192, 9);
    expect(rect.h).toBeCloseTo(192, 9);
    expect(rect.x).toBeCloseTo(2 * 520 + 256 - 96, 9);
  });

  it("grows on screen when the viewport zooms in", () => {
    const vp: Viewport = { zoom: 1.8, dx: 0.4, dy: 0.4 };
    const rect = hitRect(0, "Character", { x: 0.7, y: 0.7 }, 1, vp)!;
    // screen scale is 512 / 284
    expect(rect.w).toBeCloseTo((160 * 512) / 284, 6);
    expect(rect.h).toBeCloseTo((224 * 512) / 284, 6);
  });

  it("returns null for types that do not draw as sprites", () => {
    expect(hitRect(0, "Scene", { x: 0.5, y: 0.5 }, 1, IDENTITY)).toBeNull();
    expect(nominalExtent("Panel")).toBeNull();
    expect(nominalExtent("Symbol")).not.toBeNull();
  });
});

describe("rectContains", () => {
  it("includes the top-left edge and excludes the bottom-right", () => {
    const rect = { x: 10, y: 20, w: 100, h: 50 };
    expect(rectContains(rect, 10, 20)).toBe(true);
    expect(rectContains(rect, 109.9, 69.9)).toBe(true);
    expect(rectContains(rect, 110, 20)).toBe(false);
    expect(rectContains(rect, 10, 70)).toBe(false);
    expect(rectContains(rect, 9.9, 20)).toBe(false);
  });
});
