import { describe, expect, it } from "vitest";

import {
  EMPTY_GRID_HINT,
  WARP_TOP_COLOR,
  WEFT_TOP_COLOR,
  renderOverlay,
  type DrawSurface,
} from "../src/overlay.js";
import type { SessionState } from "../src/types.js";

type Op = (string | number)[];

/** Recording surface: logs each call with the style active at the time. */
class FakeSurface implements DrawSurface {
  canvas = { width: 300, height: 200 };
  fillStyle: string | CanvasGradient | CanvasPattern = "";
  strokeStyle: string | CanvasGradient | CanvasPattern = "";
  lineWidth = 1;
  font = "";
  ops: Op[] = [];

  setTransform(a: number, b: number, c: number, d: number, e: number, f: number): void {
    this.ops.push(["setTransform", a, b, c, d, e, f]);
  }
  clearRect(x: number, y: number, w: number, h: number): void {
    this.ops.push(["clearRect", x, y, w, h]);
  }
  fillRect(x: number, y: number, w: number, h: number): void {
    this.ops.push(["fillRect", String(this.fillStyle), x, y, w, h]);
  }
  drawImage(_image: CanvasImageSource, dx: number, dy: number): void {
    this.ops.push(["drawImage", dx, dy]);
  }
  beginPath(): void {
    this.ops.push(["beginPath"]);
  }
  moveTo(x: number, y: number): void {
    this.ops.push(["moveTo", x, y]);
  }
  lineTo(x: number, y: number): void {
    this.ops.push(["lineTo", x, y]);
  }
  arc(x: number, y: number, r: number, _a0: number, _a1: number): void {
    this.ops.push(["arc", x, y, r]);
  }
  stroke(): void {
    this.ops.push(["stroke", String(this.strokeStyle)]);
  }
  fill(): void {
    this.ops.push(["fill", String(this.fillStyle)]);
  }
  fillText(text: string, x: number, y: number): void {
    this.ops.push(["fillText", text, x, y]);
  }
}

function mkState(over: Partial<SessionState> = {}): SessionState {
  return {
    image: "x.png",
    width: 120,
    height: 90,
    warp_x: [20, 60],
    weft_y: [30],
    crossings: [
      { x: 20, y: 30, v: 0 },
      { x: 60, y: 30, v: 1 },
    ],
    colors: null,
    revision: 0,
    warning: null,
    ...over,
  };
}

const baseOpts = { zoom: 1, pan: { x: 0, y: 0 }, selection: null, image: null };

describe("renderOverlay", () => {
  it("draws one dot per crossing, red for 0 and blue for 1", () => {
    const ctx = new FakeSurface();
    renderOverlay(ctx, mkState(), baseOpts);
    const fills = ctx.ops.filter((op) => op[0] === "fill");
    expect(fills).toEqual([
      ["fill", WARP_TOP_COLOR],
      ["fill", WEFT_TOP_COLOR],
    ]);
    const arcs = ctx.ops.filter((op) => op[0] === "arc");
    expect(arcs[0]!.slice(1, 3)).toEqual([20, 30]);
    expect(arcs[1]!.slice(1, 3)).toEqual([60, 30]);
  });

  it("flipping a value only changes the dot color", () => {
    const a = new FakeSurface();
    const b = new FakeSurface();
    const s = mkState();
    renderOverlay(a, s, baseOpts);
    const flipped = {
      ...s,
      crossings: s.crossings.map((c, i) => (i === 0 ? { ...c, v: 1 as const } : c)),
    };
    renderOverlay(b, flipped, baseOpts);
    const diff = b.ops.filter((op, i) => JSON.stringify(op) !== JSON.stringify(a.ops[i]));
    expect(diff).toEqual([["fill", WEFT_TOP_COLOR]]);
  });

  it("draws warps as vertical and wefts as horizontal lines", () => {
    const ctx = new FakeSurface();
    const s = mkState({ crossings: [] });
    renderOverlay(ctx, s, baseOpts);
    const moves = ctx.ops.filter((op) => op[0] === "moveTo");
    const lines = ctx.ops.filter((op) => op[0] === "lineTo");
    expect(moves).toEqual([
      ["moveTo", 20, 0],
      ["moveTo", 60, 0],
      ["moveTo", 0, 30],
    ]);
    expect(lines).toEqual([
      ["lineTo", 20, 90],
      ["lineTo", 60, 90],
      ["lineTo", 120, 30],
    ]);
  });

  it("is idempotent: re-rendering the same state issues identical calls", () => {
    const a = new FakeSurface();
    const b = new FakeSurface();
    const s = mkState();
    const opts = { ...baseOpts, zoom: 2, pan: { x: 5, y: -3 } };
    renderOverlay(a, s, opts);
    renderOverlay(b, s, opts);
    renderOverlay(b, s, opts);
    expect(b.ops).toEqual([...a.ops, ...a.ops]);
  });

  it("shows the hint banner only while the grid is empty", () => {
    const ctx = new FakeSurface();
    renderOverlay(ctx, mkState({ warp_x: [], weft_y: [], crossings: [] }), baseOpts);
    const texts = ctx.ops.filter((op) => op[0] === "fillText");
    expect(texts).toEqual([["fillText", EMPTY_GRID_HINT, 8, 18]]);

    const full = new FakeSurface();
    renderOverlay(full, mkState(), baseOpts);
    expect(full.ops.filter((op) => op[0] === "fillText")).toEqual([]);
  });

  it("draws the image under the overlay when provided", () => {
    const ctx = new FakeSurface();
    const fakeImage = {} as CanvasImageSource;
    renderOverlay(ctx, mkState(), { ...baseOpts, image: fakeImage });
    expect(ctx.ops.filter((op) => op[0] === "drawImage")).toEqual([["drawImage", 0, 0]]);
    const i = ctx.ops.findIndex((op) => op[0] === "drawImage");
    const firstLine = ctx.ops.findIndex((op) => op[0] === "moveTo");
    expect(i).toBeLessThan(firstLine);
  });

  it("applies zoom and pan through the transform", () => {
    const ctx = new FakeSurface();
    renderOverlay(ctx, mkState(), { ...baseOpts, zoom: 2, pan: { x: 7, y: 9 } });
    expect(ctx.ops[0]).toEqual(["setTransform", 1, 0, 0, 1, 0, 0]);
    expect(ctx.ops[2]).toEqual(["setTransform", 2, 0, 0, 2, 7, 9]);
  });

  it("highlights the selected crossing with a ring", () => {
    const ctx = new FakeSurface();
    renderOverlay(ctx, mkState(), {
      ...baseOpts,
      selection: { kind: "crossing", index: 1 },
    });
    const strokes = ctx.ops.filter((op) => op[0] === "stroke" && op[1] === "#fc0");
    expect(strokes).toHaveLength(1);
  });
});
