/**
 * Session controller: owns the latest server-acknowledged state, a FIFO
 * queue of pending edits, and the single in-flight request. Pending
 * edits are echoed optimistically into the displayed state; nothing is
 * durable until the server answers with a new revision. A conflict
 * drops the queue, refetches, and thereby rolls the echo back.
 */

import type { ApiClient } from "./api.js";
import type { Crossing, Edit, SessionState } from "./types.js";

export interface ControllerEvents {
  /** Called with the state to draw (acknowledged + optimistic echo). */
  onRender(state: SessionState): void;
  onToast(message: string): void;
}

function nearestIdx(crossings: Crossing[], x: number, y: number): number {
  let best = -1;
  let bestD = Infinity;
  crossings.forEach((c, i) => {
    const d = Math.hypot(c.x - x, c.y - y);
    if (d < bestD) {
      bestD = d;
      best = i;
    }
  });
  return best;
}

/**
 * Best-effort local mirror of one edit, used only for the optimistic
 * echo between submit and acknowledgement. Server results replace it,
 * so near enough is fine; recompute is left to the server entirely.
 */
export function applyEditLocally(state: SessionState, edit: Edit): SessionState {
  const next: SessionState = {
    ...state,
    warp_x: [...state.warp_x],
    weft_y: [...state.weft_y],
    crossings: state.crossings.map((c) => ({ ...c })),
  };
  switch (edit.kind) {
    case "add_warp":
      next.warp_x.push(edit.x);
      next.warp_x.sort((a, b) => a - b);
      break;
    case "move_warp":
      if (edit.i >= 0 && edit.i < next.warp_x.length) {
        next.warp_x[edit.i] = edit.x;
        next.warp_x.sort((a, b) => a - b);
      }
      break;
    case "delete_warp":
      next.warp_x.splice(edit.i, 1);
      break;
    case "add_weft":
      next.weft_y.push(edit.y);
      next.weft_y.sort((a, b) => a - b);
      break;
    case "move_weft":
      if (edit.i >= 0 && edit.i < next.weft_y.length) {
        next.weft_y[edit.i] = edit.y;
        next.weft_y.sort((a, b) => a - b);
      }
      break;
    case "delete_weft":
      next.weft_y.splice(edit.i, 1);
      break;
    case "add_crossing":
      next.crossings.push({ x: edit.x, y: edit.y, v: edit.v });
      break;
    case "move_crossing":
      if (edit.id >= 0 && edit.id < next.crossings.length) {
        next.crossings[edit.id] = { ...next.crossings[edit.id]!, x: edit.x, y: edit.y };
      }
      break;
    case "delete_crossing": {
      const i = nearestIdx(next.crossings, edit.x, edit.y);
      if (i >= 0) next.crossings.splice(i, 1);
      break;
    }
    case "flip_nearest": {
      const i = nearestIdx(next.crossings, edit.x, edit.y);
      if (i >= 0) {
        const c = next.crossings[i]!;
        next.crossings[i] = { ...c, v: c.v === 1 ? 0 : 1 };
      }
      break;
    }
    case "recompute_crossings":
      break;
  }
  return next;
}

export class SessionController {
  private acked: SessionState;
  private queue: Edit[] = [];
  private draining: Promise<void> | null = null;

  constructor(
    private api: ApiClient,
    readonly sessionId: string,
    initial: SessionState,
    private events: ControllerEvents,
  ) {
    this.acked = initial;
  }

  /** Latest state the server acknowledged. */
  get state(): SessionState {
    return this.acked;
  }

  get revision(): number {
    return this.acked.revision;
  }

  get pendingCount(): number {
    return this.queue.length;
  }

  /** Acknowledged state with every queued edit echoed on top. */
  displayState(): SessionState {
    return this.queue.reduce(applyEditLocally, this.acked);
  }

  submit(edit: Edit): void {
    this.queue.push(edit);
    this.events.onRender(this.displayState());
    void this.pump();
  }

  /** Resolves once the queue is empty and nothing is in flight. */
  async idle(): Promise<void> {
    while (this.draining) await this.draining;
  }

  async refresh(): Promise<void> {
    this.acked = await this.api.getState(this.sessionId);
    this.events.onRender(this.displayState());
  }

  private pump(): Promise<void> {
    if (!this.draining) {
      this.draining = this.drain().finally(() => {
        this.draining = null;
      });
    }
    return this.draining;
  }

  private async drain(): Promise<void> {
    while (this.queue.length > 0) {
      const edit = this.queue[0]!;
      try {
        const res = await this.api.sendEdit(this.sessionId, edit, this.acked.revision);
        if (res.kind === "ok") {
          this.acked = res.state;
          this.queue.shift();
        } else if (res.kind === "conflict") {
          this.queue = [];
          this.events.onToast(`Someone else edited this session; reloaded. (${res.detail})`);
          this.acked = await this.api.getState(this.sessionId);
        } else {
          this.queue.shift();
          this.events.onToast(`Edit rejected: ${res.detail}`);
        }
      } catch (err) {
        this.queue = [];
        this.events.onToast(`Request failed: ${String(err)}`);
      }
      this.events.onRender(this.displayState());
    }
  }
}
