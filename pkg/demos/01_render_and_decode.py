"""Render a random weave, decode it back, and diff the patterns.

Writes the fabric image, ground truth, and decoded outputs into
demos/out/render_decode/.
"""

import os

import numpy as np

from weftcodec import RenderParams, decode, random_pattern, render
from weftcodec.formats import write_annotation, write_pbm, write_png_gray

OUT = os.path.join(os.path.dirname(__file__), "out", "render_decode")


def main():
    os.makedirs(OUT, exist_ok=True)
    # 15 rows x 25 cols fills the default 512x320 canvas with margins
    # wide enough that no crossing is border-filtered
    pattern = random_pattern(rows=15, cols=25, density=0.5, seed=7)
    img, truth = render(pattern, RenderParams(seed=7))

    write_png_gray(os.path.join(OUT, "fabric.png"), img)
    write_pbm(os.path.join(OUT, "truth.pbm"), pattern)
    write_annotation(
        os.path.join(OUT, "truth.json"), "fabric.png", truth.grid, truth.crossings, None
    )

    decoded, crossings, grid = decode(img)
    write_pbm(os.path.join(OUT, "decoded.pbm"), decoded)

    cells = pattern.size
    agree = int((decoded == pattern).sum()) if decoded.shape == pattern.shape else 0
    print(f"pattern: {pattern.shape[0]}x{pattern.shape[1]} ({cells} cells)")
    print(f"decoded grid: {len(grid.weft_y)} wefts x {len(grid.warp_x)} warps")
    print(f"candidate crossings: {len(crossings)}")
    print(f"cells agreeing with truth: {agree}/{cells}")
    print(f"outputs in {OUT}")


if __name__ == "__main__":
    main()
