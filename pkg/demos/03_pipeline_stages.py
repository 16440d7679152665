"""Walk the decode pipeline stage by stage and save each intermediate.

Produces the preprocessed image, the likelihood map, its tri-valued and
merged forms, and prints the estimated axes, colors, and final grid.
"""

import os

from weftcodec import (
    RenderParams,
    decode,
    estimate_rep_colors,
    estimate_yarn_axes,
    preprocess,
    random_pattern,
    render,
)
from weftcodec.formats import write_png_gray

OUT = os.path.join(os.path.dirname(__file__), "out", "stages")


def main():
    os.makedirs(OUT, exist_ok=True)
    pattern = random_pattern(15, 25, 0.5, 3)
    img, _ = render(pattern, RenderParams(jitter_amp=1.0, fiber_noise_density=0.01, seed=3))
    write_png_gray(os.path.join(OUT, "input.png"), img)

    pre = preprocess(img)
    write_png_gray(os.path.join(OUT, "preprocessed.png"), pre)

    grid0 = estimate_yarn_axes(pre, sigma=1.6)
    colors = estimate_rep_colors(pre)
    print(f"first-pass axes: {len(grid0.warp_x)} warps, {len(grid0.weft_y)} wefts")
    print(f"colors: warp {colors.warp:.3f}, weft {colors.weft:.3f}")

    sink = {}
    decoded, crossings, grid = decode(img, stage_sink=sink)
    for name, stage_img in sink.items():
        write_png_gray(os.path.join(OUT, f"{name}.png"), stage_img)

    print(f"refined axes: {len(grid.warp_x)} warps, {len(grid.weft_y)} wefts")
    print(f"warp_x[:5] = {[round(x, 1) for x in grid.warp_x[:5]]}")
    print(f"weft_y[:5] = {[round(y, 1) for y in grid.weft_y[:5]]}")
    print(f"decoded {decoded.shape[0]}x{decoded.shape[1]} pattern from "
          f"{len(crossings)} candidates")
    print(f"stage images in {OUT}")


if __name__ == "__main__":
    main()
