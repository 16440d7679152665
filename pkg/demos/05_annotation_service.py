"""Prepare a small image directory and exercise the annotation service.

Renders two fabric images, opens a session on one, applies a few edits
through the HTTP API (in-process), and exports the labels.  Pass
--serve to leave a live server running on http://127.0.0.1:8000 instead.
"""

import os
import sys

from weftcodec import RenderParams, random_pattern, render
from weftcodec.annosvc import create_app
from weftcodec.formats import write_png_gray

OUT = os.path.join(os.path.dirname(__file__), "out", "annotate")


def prepare():
    images = os.path.join(OUT, "images")
    exports = os.path.join(OUT, "exports")
    os.makedirs(images, exist_ok=True)
    os.makedirs(exports, exist_ok=True)
    for seed in (1, 2):
        img, _ = render(random_pattern(15, 25, 0.5, seed), RenderParams(seed=seed))
        write_png_gray(os.path.join(images, f"fabric_{seed}.png"), img)
    return images, exports


def main():
    images, exports = prepare()
    app = create_app(images, out_dir=exports)

    if "--serve" in sys.argv:
        import uvicorn

        print(f"serving {images} on http://127.0.0.1:8000 (ctrl-c to stop)")
        uvicorn.run(app, host="127.0.0.1", port=8000, log_level="warning")
        return

    from fastapi.testclient import TestClient

    with TestClient(app) as client:
        listing = client.get("/api/images").json()
        print("images:", listing["images"])

        r = client.post("/api/session", json={"image_id": listing["images"][0]})
        sid = r.json()["session"]
        state = r.json()["state"]
        print(f"session {sid}: {len(state['warp_x'])} warps, "
              f"{len(state['weft_y'])} wefts, {len(state['crossings'])} crossings")

        c0 = state["crossings"][0]
        r = client.post(
            f"/api/session/{sid}/edit",
            json={"edit": {"kind": "flip_nearest", "x": c0["x"], "y": c0["y"]},
                  "base_revision": state["revision"]},
        )
        print(f"flipped first crossing: v {c0['v']} -> "
              f"{r.json()['crossings'][0]['v']}, revision {r.json()['revision']}")

        stale = client.post(
            f"/api/session/{sid}/edit",
            json={"edit": {"kind": "add_warp", "x": 1.0}, "base_revision": 0},
        )
        print(f"stale edit rejected with {stale.status_code}: {stale.json()['detail']}")

        r = client.post(f"/api/session/{sid}/export", json={"kind": "box"})
        for name, path in r.json()["files"].items():
            print(f"exported {name}: {path}")


if __name__ == "__main__":
    main()
