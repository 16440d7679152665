/**
 * Canvas overlay renderer. Draws the fabric image, warp and weft guide
 * lines, and one dot per crossing: red when the warp is on top (value
 * 0), blue when the weft is on top (value 1). Pure function of the
 * latest acknowledged state, so re-rendering is idempotent.
 *
 * The drawing surface is a structural subset of CanvasRenderingContext2D
 * so tests can substitute a recording fake.
 */

import type { SessionState } from "./types.js";

export interface DrawSurface {
  canvas: { width: number; height: number };
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  setTransform(a: number, b: number, c: number, d: number, e: number, f: number): void;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  drawImage(image: CanvasImageSource, dx: number, dy: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  stroke(): void;
  fill(): void;
  fillText(text: string, x: number, y: number): void;
}

export const WARP_TOP_COLOR = "#d33";
export const WEFT_TOP_COLOR = "#36c";
export const EMPTY_GRID_HINT =
  "No grid yet: shift+click to add warps, ctrl+click to add wefts, then press C";

export interface OverlayOptions {
  zoom: number;
  pan: { x: number; y: number };
  selection: { kind: "warp" | "weft" | "crossing"; index: number } | null;
  /** Bitmap of the fabric image, or null while it is still loading. */
  image: CanvasImageSource | null;
}

export function renderOverlay(ctx: DrawSurface, state: SessionState, opts: OverlayOptions): void {
  ctx.setTransform(1, 0, 0, 1, 0, 0);
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  ctx.setTransform(opts.zoom, 0, 0, opts.zoom, opts.pan.x, opts.pan.y);

  if (opts.image) {
    ctx.drawImage(opts.image, 0, 0);
  } else {
    ctx.fillStyle = "#888";
    ctx.fillRect(0, 0, state.width, state.height);
  }

  const sel = opts.selection;
  state.warp_x.forEach((x, i) => {
    ctx.strokeStyle = sel?.kind === "warp" && sel.index === i ? "#fc0" : "rgba(40,200,90,0.8)";
    ctx.lineWidth = 1.5 / opts.zoom;
    ctx.beginPath();
    ctx.moveTo(x, 0);
    ctx.lineTo(x, state.height);
    ctx.stroke();
  });
  state.weft_y.forEach((y, i) => {
    ctx.strokeStyle = sel?.kind === "weft" && sel.index === i ? "#fc0" : "rgba(40,200,90,0.8)";
    ctx.lineWidth = 1.5 / opts.zoom;
    ctx.beginPath();
    ctx.moveTo(0, y);
    ctx.lineTo(state.width, y);
    ctx.stroke();
  });

  state.crossings.forEach((c, i) => {
    ctx.fillStyle = c.v === 1 ? WEFT_TOP_COLOR : WARP_TOP_COLOR;
    ctx.beginPath();
    ctx.arc(c.x, c.y, 3.5 / opts.zoom, 0, 2 * Math.PI);
    ctx.fill();
    if (sel?.kind === "crossing" && sel.index === i) {
      ctx.strokeStyle = "#fc0";
      ctx.lineWidth = 1.5 / opts.zoom;
      ctx.beginPath();
      ctx.arc(c.x, c.y, 6 / opts.zoom, 0, 2 * Math.PI);
      ctx.stroke();
    }
  });

  if (state.warp_x.length === 0 && state.weft_y.length === 0) {
    ctx.setTransform(1, 0, 0, 1, 0, 0);
    ctx.fillStyle = "rgba(0,0,0,0.65)";
    ctx.fillRect(0, 0, ctx.canvas.width, 28);
    ctx.fillStyle = "#fff";
    ctx.font = "13px system-ui, sans-serif";
    ctx.fillText(EMPTY_GRID_HINT, 8, 18);
  }
}
