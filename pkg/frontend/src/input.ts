/**
 * Pure input mapping: pointer and key events (already in image
 * coordinates) become edits or view changes. No DOM access here so the
 * whole vocabulary is unit-testable.
 *
 * Modifier convention: shift addresses warps, ctrl addresses wefts,
 * no modifier addresses crossings. Left click adds or selects, a drag
 * moves the selected structure, right click deletes.
 */

import type { Crossing, Edit, Mode, Selection, SessionState } from "./types.js";

/** Image-space distance within which a click grabs an existing target. */
export const SNAP = 6;

export function modeFromModifiers(shift: boolean, ctrl: boolean): Mode {
  if (shift) return "warp";
  if (ctrl) return "weft";
  return "crossing";
}

/** Key presses that emit edits; anything else is left to the caller. */
export function keyEdit(key: string, cursor: { x: number; y: number }): Edit | null {
  switch (key.toLowerCase()) {
    case "f":
      return { kind: "flip_nearest", x: cursor.x, y: cursor.y };
    case "c":
      return { kind: "recompute_crossings" };
    default:
      return null;
  }
}

export function nearestAxis(values: number[], q: number): { i: number; d: number } | null {
  let best: { i: number; d: number } | null = null;
  values.forEach((v, i) => {
    const d = Math.abs(v - q);
    if (best === null || d < best.d) best = { i, d };
  });
  return best;
}

export function nearestCrossing(
  crossings: Crossing[],
  x: number,
  y: number,
): { i: number; d: number } | null {
  let best: { i: number; d: number } | null = null;
  crossings.forEach((c, i) => {
    const d = Math.hypot(c.x - x, c.y - y);
    if (best === null || d < best.d) best = { i, d };
  });
  return best;
}

export type ClickAction =
  | { type: "edit"; edit: Edit }
  | { type: "select"; selection: Selection }
  | { type: "none" };

/**
 * Resolve a pointer-down. Near an existing target it selects (left) or
 * deletes (right); in empty space it adds. New crossings start as 0
 * (warp on top); press F to flip them.
 */
export function clickAction(
  state: SessionState,
  mode: Mode,
  x: number,
  y: number,
  rightButton: boolean,
): ClickAction {
  if (mode === "warp") {
    const hit = nearestAxis(state.warp_x, x);
    if (hit && hit.d <= SNAP) {
      if (rightButton) return { type: "edit", edit: { kind: "delete_warp", i: hit.i } };
      return { type: "select", selection: { kind: "warp", index: hit.i } };
    }
    if (rightButton) return { type: "none" };
    return { type: "edit", edit: { kind: "add_warp", x } };
  }
  if (mode === "weft") {
    const hit = nearestAxis(state.weft_y, y);
    if (hit && hit.d <= SNAP) {
      if (rightButton) return { type: "edit", edit: { kind: "delete_weft", i: hit.i } };
      return { type: "select", selection: { kind: "weft", index: hit.i } };
    }
    if (rightButton) return { type: "none" };
    return { type: "edit", edit: { kind: "add_weft", y } };
  }
  const hit = nearestCrossing(state.crossings, x, y);
  if (hit && hit.d <= SNAP) {
    if (rightButton) return { type: "edit", edit: { kind: "delete_crossing", x, y } };
    return { type: "select", selection: { kind: "crossing", index: hit.i } };
  }
  if (rightButton) return { type: "none" };
  return { type: "edit", edit: { kind: "add_crossing", x, y, v: 0 } };
}

/** Resolve the end of a drag that started on a selected structure. */
export function dragEdit(selection: Selection, x: number, y: number): Edit {
  switch (selection.kind) {
    case "warp":
      return { kind: "move_warp", i: selection.index, x };
    case "weft":
      return { kind: "move_weft", i: selection.index, y };
    case "crossing":
      return { kind: "move_crossing", id: selection.index, x, y };
  }
}

/** Wheel zoom about a screen point, clamped to a sane range. */
export function zoomed(
  view: { zoom: number; pan: { x: number; y: number } },
  delta: number,
  at: { x: number; y: number },
): { zoom: number; pan: { x: number; y: number } } {
  const factor = delta < 0 ? 1.25 : 0.8;
  const zoom = Math.min(16, Math.max(0.25, view.zoom * factor));
  // keep the image point under the cursor fixed on screen
  const scale = zoom / view.zoom;
  return {
    zoom,
    pan: {
      x: at.x - (at.x - view.pan.x) * scale,
      y: at.y - (at.y - view.pan.y) * scale,
    },
  };
}

export function toImageCoords(
  view: { zoom: number; pan: { x: number; y: number } },
  sx: number,
  sy: number,
): { x: number; y: number } {
  return { x: (sx - view.pan.x) / view.zoom, y: (sy - view.pan.y) / view.zoom };
}
