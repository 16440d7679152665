/** Shared wire and client-side types for the annotation editor. */

export interface Crossing {
  x: number;
  y: number;
  v: 0 | 1;
}

export interface SessionState {
  image: string;
  width: number;
  height: number;
  warp_x: number[];
  weft_y: number[];
  crossings: Crossing[];
  colors: { warp: number; weft: number } | null;
  revision: number;
  warning: string | null;
}

/** Edit vocabulary accepted by POST /api/session/{sid}/edit. */
export type Edit =
  | { kind: "add_warp"; x: number }
  | { kind: "add_weft"; y: number }
  | { kind: "move_warp"; i: number; x: number }
  | { kind: "move_weft"; i: number; y: number }
  | { kind: "delete_warp"; i: number }
  | { kind: "delete_weft"; i: number }
  | { kind: "recompute_crossings" }
  | { kind: "flip_nearest"; x: number; y: number }
  | { kind: "add_crossing"; x: number; y: number; v: 0 | 1 }
  | { kind: "delete_crossing"; x: number; y: number }
  | { kind: "move_crossing"; id: number; x: number; y: number };

export type EditResult =
  | { kind: "ok"; state: SessionState }
  | { kind: "conflict"; detail: string }
  | { kind: "rejected"; detail: string };

/** Which structure mouse actions address, derived from held modifiers. */
export type Mode = "crossing" | "warp" | "weft";

export interface Selection {
  kind: Mode;
  index: number;
}

export interface ViewState {
  zoom: number;
  pan: { x: number; y: number };
  mode: Mode;
  selection: Selection | null;
  /** Revision of the last state the server acknowledged. */
  revision: number;
}
