/**
 * Browser entry point: wires the image picker, canvas, pointer and key
 * handlers, and export buttons to the session controller.
 */

import { ApiClient } from "./api.js";
import { SessionController } from "./controller.js";
import { clickAction, dragEdit, keyEdit, modeFromModifiers, toImageCoords, zoomed } from "./input.js";
import { renderOverlay } from "./overlay.js";
import type { Mode, Selection, SessionState } from "./types.js";

const api = new ApiClient("");

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const picker = el<HTMLSelectElement>("picker");
const openBtn = el<HTMLButtonElement>("open");
const canvas = el<HTMLCanvasElement>("canvas");
const status = el<HTMLElement>("status");
const toast = el<HTMLElement>("toast");
const modeBadge = el<HTMLElement>("mode");

let controller: SessionController | null = null;
let shown: SessionState | null = null;
let bitmap: HTMLImageElement | null = null;
let view = { zoom: 1, pan: { x: 0, y: 0 } };
let selection: Selection | null = null;
let cursor = { x: 0, y: 0 };
let drag: { kind: "pan"; sx: number; sy: number } | { kind: "move"; moved: boolean } | null = null;

let toastTimer: ReturnType<typeof setTimeout> | null = null;
function showToast(message: string): void {
  toast.textContent = message;
  toast.classList.add("visible");
  if (toastTimer) clearTimeout(toastTimer);
  toastTimer = setTimeout(() => toast.classList.remove("visible"), 4000);
}

function drawAll(): void {
  if (!shown) return;
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  renderOverlay(ctx, shown, { zoom: view.zoom, pan: view.pan, selection, image: bitmap });
  const pending = controller && controller.pendingCount > 0 ? ` · ${controller.pendingCount} pending` : "";
  const warn = shown.warning ? ` · ${shown.warning}` : "";
  status.textContent =
    `rev ${controller?.revision ?? 0} · grid ${shown.warp_x.length}x${shown.weft_y.length}` +
    ` · ${shown.crossings.length} crossings${pending}${warn}`;
}

function setShown(state: SessionState): void {
  shown = state;
  if (selection) {
    const n =
      selection.kind === "warp"
        ? state.warp_x.length
        : selection.kind === "weft"
          ? state.weft_y.length
          : state.crossings.length;
    if (selection.index >= n) selection = null;
  }
  drawAll();
}

function updateModeBadge(shift: boolean, ctrl: boolean): void {
  const mode: Mode = modeFromModifiers(shift, ctrl);
  modeBadge.textContent = mode;
  modeBadge.dataset.mode = mode;
}

async function openImage(imageId: string): Promise<void> {
  const { session, state } = await api.openSession(imageId);
  controller = new SessionController(api, session, state, {
    onRender: setShown,
    onToast: showToast,
  });
  selection = null;
  view = { zoom: 1, pan: { x: 0, y: 0 } };
  canvas.width = Math.max(state.width, 400);
  canvas.height = Math.max(state.height, 300);
  bitmap = new Image();
  bitmap.onload = drawAll;
  bitmap.src = api.imageUrl(imageId);
  if (state.warning) showToast(state.warning);
  setShown(state);
}

canvas.addEventListener("pointerdown", (e) => {
  if (!controller || !shown) return;
  e.preventDefault();
  canvas.setPointerCapture(e.pointerId);
  if (e.button === 1) {
    drag = { kind: "pan", sx: e.offsetX - view.pan.x, sy: e.offsetY - view.pan.y };
    return;
  }
  const p = toImageCoords(view, e.offsetX, e.offsetY);
  const mode = modeFromModifiers(e.shiftKey, e.ctrlKey);
  const action = clickAction(controller.displayState(), mode, p.x, p.y, e.button === 2);
  if (action.type === "select") {
    selection = action.selection;
    drag = { kind: "move", moved: false };
    drawAll();
  } else if (action.type === "edit") {
    if (action.edit.kind.startsWith("delete")) selection = null;
    controller.submit(action.edit);
  }
});

canvas.addEventListener("pointermove", (e) => {
  cursor = toImageCoords(view, e.offsetX, e.offsetY);
  if (drag?.kind === "pan") {
    view = { ...view, pan: { x: e.offsetX - drag.sx, y: e.offsetY - drag.sy } };
    drawAll();
  } else if (drag?.kind === "move") {
    drag.moved = true;
  }
});

canvas.addEventListener("pointerup", (e) => {
  if (drag?.kind === "move" && drag.moved && selection && controller) {
    const p = toImageCoords(view, e.offsetX, e.offsetY);
    controller.submit(dragEdit(selection, p.x, p.y));
  }
  drag = null;
});

canvas.addEventListener("contextmenu", (e) => e.preventDefault());

canvas.addEventListener(
  "wheel",
  (e) => {
    e.preventDefault();
    view = { ...view, ...zoomed(view, e.deltaY, { x: e.offsetX, y: e.offsetY }) };
    drawAll();
  },
  { passive: false },
);

window.addEventListener("keydown", (e) => {
  updateModeBadge(e.shiftKey, e.ctrlKey);
  if (e.target instanceof HTMLInputElement || e.target instanceof HTMLSelectElement) return;
  if (!controller) return;
  if (e.key === "Escape") {
    selection = null;
    drawAll();
    return;
  }
  const edit = keyEdit(e.key, cursor);
  if (edit) {
    e.preventDefault();
    controller.submit(edit);
  }
});

window.addEventListener("keyup", (e) => updateModeBadge(e.shiftKey, e.ctrlKey));

openBtn.addEventListener("click", () => {
  const id = picker.value;
  if (id) void openImage(id).catch((err) => showToast(String(err)));
});

for (const kind of ["box", "gaussian", "impulse"] as const) {
  el<HTMLButtonElement>(`export-${kind}`).addEventListener("click", () => {
    if (!controller) return;
    api
      .exportLabels(controller.sessionId, kind)
      .then((files) => {
        const names = Object.values(files)
          .map((p) => p.split("/").pop())
          .join(", ");
        showToast(`Exported: ${names}`);
      })
      .catch((err) => showToast(String(err)));
  });
}

async function boot(): Promise<void> {
  updateModeBadge(false, false);
  const images = await api.listImages();
  for (const id of images) {
    const opt = document.createElement("option");
    opt.value = id;
    opt.textContent = id;
    picker.appendChild(opt);
  }
  if (images.length === 1) void openImage(images[0]!);
}

void boot().catch((err) => showToast(String(err)));
