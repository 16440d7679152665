"""Annotation session service: serve images, hold editable grid/crossing
state, apply edits with optimistic concurrency, export label files.

Each successful edit bumps the session revision and journals the current
annotation to disk, so a crash loses at most the in-flight edit.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.responses import FileResponse

from .errors import (
    AxisEstimationError,
    DegenerateColorsError,
    InvalidInputError,
    WeftError,
)
from .formats import read_png_gray, write_annotation, write_pbm, write_png_gray
from .geometry import CrossPointSet, YarnGrid
from .midrep import MidRepKind
from .pipeline_pre import (
    RepColors,
    estimate_rep_colors,
    estimate_yarn_axes,
    initial_crossings,
    preprocess,
)
from .postproc import DecodeConfig, assign_grid

__all__ = ["create_app", "Session"]


@dataclass
class Session:
    image_id: str
    img: object
    pre: object
    warp_x: list[float]
    weft_y: list[float]
    crossings: list[tuple[float, float, int]]
    colors: RepColors | None
    revision: int = 0
    warning: str | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def size(self) -> tuple[int, int]:
        h, w = self.img.shape
        return w, h

    def state(self) -> dict:
        w, h = self.size
        return {
            "image": self.image_id,
            "width": w,
            "height": h,
            "warp_x": list(self.warp_x),
            "weft_y": list(self.weft_y),
            "crossings": [
                {"x": x, "y": y, "v": v} for x, y, v in self.crossings
            ],
            "colors": None
            if self.colors is None
            else {"warp": self.colors.warp, "weft": self.colors.weft},
            "revision": self.revision,
            "warning": self.warning,
        }


def _require(cond: bool, msg: str):
    if not cond:
        raise InvalidInputError(msg)


def _nearest(crossings, x: float, y: float) -> int:
    _require(len(crossings) > 0, "no crossings to target")
    best = None
    for k, (cx, cy, _) in enumerate(crossings):
        d2 = (cx - x) ** 2 + (cy - y) ** 2
        if best is None or (d2, k) < best:
            best = (d2, k)
    return best[1]


def _inserted(axis: list[float], value: float, lo: float, hi: float) -> list[float]:
    _require(lo <= value <= hi, f"position {value} outside [{lo}, {hi}]")
    _require(value not in axis, f"position {value} already present")
    return sorted(axis + [value])


def _moved(axis: list[float], i: int, value: float, lo: float, hi: float) -> list[float]:
    _require(0 <= i < len(axis), f"index {i} out of range")
    _require(lo <= value <= hi, f"position {value} outside [{lo}, {hi}]")
    rest = axis[:i] + axis[i + 1 :]
    _require(value not in rest, f"position {value} already present")
    return sorted(rest + [value])


def _removed(axis: list[float], i: int) -> list[float]:
    _require(0 <= i < len(axis), f"index {i} out of range")
    return axis[:i] + axis[i + 1 :]


class _Service:
    def __init__(self, image_dir: str, out_dir: str, cfg: DecodeConfig):
        self.image_dir = image_dir
        self.out_dir = out_dir
        self.cfg = cfg
        self.sessions: dict[str, Session] = {}
        self.counter = 0
        self.lock = threading.Lock()

    def list_images(self) -> list[str]:
        return sorted(
            f for f in os.listdir(self.image_dir) if f.lower().endswith(".png")
        )

    def image_path(self, image_id: str) -> str:
        if os.sep in image_id or image_id not in self.list_images():
            raise HTTPException(404, f"unknown image '{image_id}'")
        return os.path.join(self.image_dir, image_id)

    def open_session(self, image_id: str) -> Session:
        img = read_png_gray(self.image_path(image_id))
        pre = preprocess(img, self.cfg.open_radius)
        warning = None
        try:
            grid = estimate_yarn_axes(
                pre, sigma=self.cfg.log_sigma, smooth_halfwidth=self.cfg.smooth_halfwidth
            )
            colors = estimate_rep_colors(pre, self.cfg.warp_dark)
            crossings = initial_crossings(pre, grid, colors)
            warp_x, weft_y = list(grid.warp_x), list(grid.weft_y)
        except (AxisEstimationError, DegenerateColorsError) as e:
            warp_x, weft_y, crossings, colors = [], [], CrossPointSet(), None
            warning = f"automatic estimation failed: {e}"
        with self.lock:
            self.counter += 1
            sid = f"s{self.counter}"
            session = Session(
                image_id=image_id,
                img=img,
                pre=pre,
                warp_x=warp_x,
                weft_y=weft_y,
                crossings=list(crossings),
                colors=colors,
                warning=warning,
            )
            self.sessions[sid] = session
        return session

    def get(self, sid: str) -> Session:
        try:
            return self.sessions[sid]
        except KeyError:
            raise HTTPException(404, f"unknown session '{sid}'") from None

    def _apply(self, s: Session, edit: dict):
        """Compute the post-edit state; raises on bad edits without mutating."""
        kind = edit.get("kind")
        w, h = s.size
        wx, wy, cr = list(s.warp_x), list(s.weft_y), list(s.crossings)
        colors = s.colors
        if kind == "add_warp":
            wx = _inserted(wx, float(edit["x"]), 0, w - 1)
        elif kind == "add_weft":
            wy = _inserted(wy, float(edit["y"]), 0, h - 1)
        elif kind == "move_warp":
            wx = _moved(wx, int(edit["i"]), float(edit["x"]), 0, w - 1)
        elif kind == "move_weft":
            wy = _moved(wy, int(edit["i"]), float(edit["y"]), 0, h - 1)
        elif kind == "delete_warp":
            wx = _removed(wx, int(edit["i"]))
        elif kind == "delete_weft":
            wy = _removed(wy, int(edit["i"]))
        elif kind == "recompute_crossings":
            _require(bool(wx) and bool(wy), "grid is empty; add yarns first")
            if colors is None:
                colors = estimate_rep_colors(s.pre, self.cfg.warp_dark)
            cr = list(initial_crossings(s.pre, YarnGrid(wx, wy), colors))
        elif kind == "flip_nearest":
            k = _nearest(cr, float(edit["x"]), float(edit["y"]))
            x, y, v = cr[k]
            cr[k] = (x, y, 1 - v)
        elif kind == "add_crossing":
            x, y, v = float(edit["x"]), float(edit["y"]), int(edit["v"])
            _require(v in (0, 1), f"v must be 0 or 1, got {v}")
            _require(0 <= x <= w - 1 and 0 <= y <= h - 1, f"({x}, {y}) outside image")
            cr.append((x, y, v))
        elif kind == "delete_crossing":
            k = _nearest(cr, float(edit["x"]), float(edit["y"]))
            del cr[k]
        elif kind == "move_crossing":
            k = int(edit["id"])
            _require(0 <= k < len(cr), f"crossing id {k} out of range")
            x, y = float(edit["x"]), float(edit["y"])
            _require(0 <= x <= w - 1 and 0 <= y <= h - 1, f"({x}, {y}) outside image")
            cr[k] = (x, y, cr[k][2])
        else:
            raise InvalidInputError(f"unknown edit kind '{kind}'")
        return wx, wy, cr, colors

    def edit(self, sid: str, edit: dict, base_revision: int) -> Session:
        s = self.get(sid)
        with s.lock:
            if base_revision != s.revision:
                raise HTTPException(
                    409,
                    f"stale revision: expected {s.revision}, got {base_revision}",
                )
            try:
                wx, wy, cr, colors = self._apply(s, edit)
            except (InvalidInputError, WeftError) as e:
                raise HTTPException(422, str(e)) from e
            except (KeyError, TypeError, ValueError) as e:
                raise HTTPException(422, f"malformed edit: {e}") from e
            s.warp_x, s.weft_y, s.crossings, s.colors = wx, wy, cr, colors
            s.revision += 1
            self._journal(sid, s)
        return s

    def _journal(self, sid: str, s: Session):
        os.makedirs(self.out_dir, exist_ok=True)
        colors = None if s.colors is None else (s.colors.warp, s.colors.weft)
        write_annotation(
            os.path.join(self.out_dir, f"{sid}.json"),
            s.image_id,
            YarnGrid(s.warp_x, s.weft_y),
            s.crossings,
            colors,
        )

    def export(self, sid: str, kind: dict) -> dict:
        s = self.get(sid)
        with s.lock:
            if not s.crossings:
                raise HTTPException(422, "session has no crossings to export")
            try:
                rep = MidRepKind(
                    kind=kind.get("kind", "box"),
                    sigma=float(kind.get("sigma", 5.0)),
                    w=int(kind.get("w", 9)),
                )
                w, h = s.size
                img = rep.build(s.crossings, w, h)
                _require(bool(s.warp_x) and bool(s.weft_y), "grid is empty")
                _require(s.colors is not None, "no yarn colors estimated")
                grid = YarnGrid(s.warp_x, s.weft_y)
                pattern = assign_grid(s.crossings, grid, s.pre, s.colors, self.cfg.s)
            except (InvalidInputError, WeftError) as e:
                raise HTTPException(422, str(e)) from e
            os.makedirs(self.out_dir, exist_ok=True)
            paths = {
                "midrep": os.path.join(self.out_dir, f"{sid}_{rep.kind}.png"),
                "annotation": os.path.join(self.out_dir, f"{sid}_annotation.json"),
                "pattern": os.path.join(self.out_dir, f"{sid}_pattern.pbm"),
            }
            write_png_gray(paths["midrep"], img)
            colors = (s.colors.warp, s.colors.weft)
            write_annotation(paths["annotation"], s.image_id, grid, s.crossings, colors)
            write_pbm(paths["pattern"], pattern)
        return {"files": paths}


def create_app(
    image_dir: str,
    out_dir: str | None = None,
    cfg: DecodeConfig | None = None,
    ui_dir: str | None = None,
) -> FastAPI:
    """Build the annotation service app rooted at an image directory."""
    svc = _Service(image_dir, out_dir or image_dir, cfg or DecodeConfig())
    app = FastAPI(title="weftcodec annotation service")
    app.state.service = svc

    @app.get("/api/images")
    def images():
        return {"images": svc.list_images()}

    @app.get("/api/image/{image_id}")
    def image(image_id: str):
        return FileResponse(svc.image_path(image_id), media_type="image/png")

    @app.post("/api/session")
    def open_session(body: dict):
        image_id = body.get("image_id")
        if not isinstance(image_id, str):
            raise HTTPException(422, "body must contain image_id")
        session = svc.open_session(image_id)
        sid = next(k for k, v in svc.sessions.items() if v is session)
        return {"session": sid, "state": session.state()}

    @app.get("/api/session/{sid}")
    def get_session(sid: str):
        return svc.get(sid).state()

    @app.post("/api/session/{sid}/edit")
    def apply_edit(sid: str, body: dict):
        edit = body.get("edit")
        base = body.get("base_revision")
        if not isinstance(edit, dict) or not isinstance(base, int) or isinstance(base, bool):
            raise HTTPException(422, "body must contain edit (object) and base_revision (int)")
        return svc.edit(sid, edit, base).state()

    @app.post("/api/session/{sid}/export")
    def export(sid: str, body: dict):
        kind = body.get("kind")
        if isinstance(kind, str):
            kind = {"kind": kind}
        if not isinstance(kind, dict):
            raise HTTPException(422, "body must contain kind")
        return svc.export(sid, kind)

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app
