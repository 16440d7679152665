import { describe, expect, it } from "vitest";

import type { ApiClient } from "../src/api.js";
import { SessionController, applyEditLocally } from "../src/controller.js";
import type { Edit, EditResult, SessionState } from "../src/types.js";

function mkState(over: Partial<SessionState> = {}): SessionState {
  return {
    image: "x.png",
    width: 100,
    height: 80,
    warp_x: [10, 30],
    weft_y: [10, 30],
    crossings: [
      { x: 10, y: 10, v: 0 },
      { x: 30, y: 10, v: 1 },
    ],
    colors: null,
    revision: 0,
    warning: null,
    ...over,
  };
}

interface Deferred<T> {
  promise: Promise<T>;
  resolve: (v: T) => void;
  reject: (e: unknown) => void;
}

function deferred<T>(): Deferred<T> {
  let resolve!: (v: T) => void;
  let reject!: (e: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

/** Fake API that parks every sendEdit until the test releases it. */
class FakeApi {
  sent: { edit: Edit; base: number; d: Deferred<EditResult> }[] = [];
  stateRequests = 0;
  nextState: SessionState = mkState({ revision: 99 });

  sendEdit(_sid: string, edit: Edit, base: number): Promise<EditResult> {
    const d = deferred<EditResult>();
    this.sent.push({ edit, base, d });
    return d.promise;
  }

  getState(_sid: string): Promise<SessionState> {
    this.stateRequests += 1;
    return Promise.resolve(this.nextState);
  }
}

function setup(initial = mkState()) {
  const api = new FakeApi();
  const renders: SessionState[] = [];
  const toasts: string[] = [];
  const ctl = new SessionController(api as unknown as ApiClient, "sid", initial, {
    onRender: (s) => renders.push(s),
    onToast: (m) => toasts.push(m),
  });
  return { api, ctl, renders, toasts };
}

const tick = () => new Promise<void>((r) => setTimeout(r, 0));

describe("applyEditLocally", () => {
  it("mirrors grid and crossing edits without mutating the input", () => {
    const s = mkState();
    const added = applyEditLocally(s, { kind: "add_warp", x: 20 });
    expect(added.warp_x).toEqual([10, 20, 30]);
    expect(s.warp_x).toEqual([10, 30]);

    const moved = applyEditLocally(s, { kind: "move_weft", i: 0, y: 50 });
    expect(moved.weft_y).toEqual([30, 50]);

    const flipped = applyEditLocally(s, { kind: "flip_nearest", x: 29, y: 11 });
    expect(flipped.crossings[1]).toEqual({ x: 30, y: 10, v: 0 });
    expect(s.crossings[1]!.v).toBe(1);

    const gone = applyEditLocally(s, { kind: "delete_crossing", x: 9, y: 9 });
    expect(gone.crossings).toHaveLength(1);
    expect(gone.crossings[0]!.x).toBe(30);
  });

  it("leaves recompute to the server", () => {
    const s = mkState();
    expect(applyEditLocally(s, { kind: "recompute_crossings" })).toEqual(s);
  });
});

describe("SessionController queueing", () => {
  it("keeps at most one edit in flight and sends in FIFO order", async () => {
    const { api, ctl } = setup();
    ctl.submit({ kind: "add_warp", x: 20 });
    ctl.submit({ kind: "add_warp", x: 40 });
    ctl.submit({ kind: "add_weft", y: 50 });
    await tick();
    expect(api.sent).toHaveLength(1);
    expect(ctl.pendingCount).toBe(3);

    api.sent[0]!.d.resolve({ kind: "ok", state: mkState({ revision: 1, warp_x: [10, 20, 30] }) });
    await tick();
    expect(api.sent).toHaveLength(2);
    expect(api.sent[1]!.edit).toEqual({ kind: "add_warp", x: 40 });
    expect(api.sent[1]!.base).toBe(1);

    api.sent[1]!.d.resolve({ kind: "ok", state: mkState({ revision: 2 }) });
    await tick();
    expect(api.sent[2]!.edit).toEqual({ kind: "add_weft", y: 50 });
    api.sent[2]!.d.resolve({ kind: "ok", state: mkState({ revision: 3 }) });
    await ctl.idle();
    expect(ctl.revision).toBe(3);
    expect(ctl.pendingCount).toBe(0);
  });

  it("echoes queued edits optimistically until acknowledged", async () => {
    const { api, ctl, renders } = setup();
    ctl.submit({ kind: "add_crossing", x: 50, y: 50, v: 0 });
    expect(ctl.displayState().crossings).toHaveLength(3);
    expect(ctl.state.crossings).toHaveLength(2);
    expect(renders.at(-1)!.crossings).toHaveLength(3);

    await tick();
    const acked = mkState({
      revision: 1,
      crossings: [...mkState().crossings, { x: 50, y: 50, v: 0 }],
    });
    api.sent[0]!.d.resolve({ kind: "ok", state: acked });
    await ctl.idle();
    expect(ctl.state).toEqual(acked);
    expect(ctl.displayState()).toEqual(acked);
  });

  it("carries the latest acknowledged revision as base_revision", async () => {
    const { api, ctl } = setup(mkState({ revision: 7 }));
    ctl.submit({ kind: "recompute_crossings" });
    await tick();
    expect(api.sent[0]!.base).toBe(7);
    api.sent[0]!.d.resolve({ kind: "ok", state: mkState({ revision: 8 }) });
    await ctl.idle();
  });
});

describe("SessionController conflict handling", () => {
  it("drops the queue, refetches, and rolls back the echo on 409", async () => {
    const { api, ctl, toasts } = setup();
    const serverTruth = mkState({ revision: 5, warp_x: [10, 25, 30] });
    api.nextState = serverTruth;

    ctl.submit({ kind: "add_warp", x: 20 });
    ctl.submit({ kind: "add_warp", x: 60 });
    await tick();
    api.sent[0]!.d.resolve({ kind: "conflict", detail: "stale revision: expected 5, got 0" });
    await ctl.idle();

    expect(api.sent).toHaveLength(1);
    expect(ctl.pendingCount).toBe(0);
    expect(api.stateRequests).toBe(1);
    expect(ctl.revision).toBe(5);
    expect(ctl.displayState()).toEqual(serverTruth);
    expect(toasts).toHaveLength(1);
    expect(toasts[0]).toContain("stale revision");
  });

  it("drops only the rejected edit and continues with the rest", async () => {
    const { api, ctl, toasts } = setup();
    ctl.submit({ kind: "add_warp", x: -5 });
    ctl.submit({ kind: "add_warp", x: 20 });
    await tick();
    api.sent[0]!.d.resolve({ kind: "rejected", detail: "position -5 outside [0, 99]" });
    await tick();
    expect(api.sent).toHaveLength(2);
    expect(api.sent[1]!.edit).toEqual({ kind: "add_warp", x: 20 });
    api.sent[1]!.d.resolve({ kind: "ok", state: mkState({ revision: 1 }) });
    await ctl.idle();
    expect(toasts[0]).toContain("rejected");
    expect(ctl.revision).toBe(1);
  });

  it("clears the queue and reports when the network fails", async () => {
    const { api, ctl, toasts } = setup();
    ctl.submit({ kind: "add_warp", x: 20 });
    ctl.submit({ kind: "add_warp", x: 40 });
    await tick();
    api.sent[0]!.d.reject(new Error("boom"));
    await ctl.idle();
    expect(ctl.pendingCount).toBe(0);
    expect(toasts[0]).toContain("boom");
    expect(ctl.displayState()).toEqual(mkState());
  });

  it("refresh replaces the acknowledged state", async () => {
    const { api, ctl, renders } = setup();
    api.nextState = mkState({ revision: 3, warning: "out of band change" });
    await ctl.refresh();
    expect(ctl.revision).toBe(3);
    expect(renders.at(-1)!.warning).toBe("out of band change");
  });
});
