"""Decode back end: tri-valuing, region merging, representatives, grid assignment.

The likelihood map is flattened to three values, mixed black/white
clusters are repainted to their majority value, each region's centroid
becomes a candidate crossing, yarn axes are re-estimated from the
candidates' distance transform, and every grid point takes the value of
its best candidate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AxisEstimationError,
    ContractViolationError,
    DecodeStageError,
    InvalidInputError,
)
from .geometry import CrossPointSet, YarnGrid, window_mean
from .imgproc import ccl, distance_transform, validate_gray
from .midrep import _classical_front, load_likelihood
from .pipeline_pre import (
    RepColors,
    estimate_rep_colors,
    preprocess,
    profile_minima,
    smooth_profile,
)

__all__ = [
    "DecodeConfig",
    "trivalue",
    "merge_regions",
    "extract_representatives",
    "reestimate_axes",
    "assign_grid",
    "decode",
]


@dataclass
class DecodeConfig:
    """Tunables for the classical decode pipeline.

    `border_margin` defaults to `s`: a grid point closer to the border
    than the assignment radius cannot see a full candidate disk, so its
    candidates are untrustworthy.  `log_sigma` is calibrated for the
    bundled renderer's groove width; raise it for blurrier imagery.
    """

    s: float = 10.0
    trivalue_thresholds: tuple[float, float] = (0.25, 0.75)
    smooth_halfwidth: int = 5
    border_margin: float | None = None
    open_radius: float = 5.5
    log_sigma: float = 1.6
    box_w: int = 9
    warp_dark: bool = True

    def __post_init__(self):
        low, high = self.trivalue_thresholds
        if not (0.0 < low < high < 1.0):
            raise InvalidInputError("trivalue thresholds must satisfy 0 < low < high < 1")
        if self.s <= 0:
            raise InvalidInputError("assignment radius s must be > 0")
        if self.smooth_halfwidth < 0:
            raise InvalidInputError("smooth_halfwidth must be >= 0")
        if self.border_margin is not None and self.border_margin < 0:
            raise InvalidInputError("border_margin must be >= 0")

    @property
    def effective_border_margin(self) -> float:
        return self.s if self.border_margin is None else self.border_margin


def trivalue(lmap: np.ndarray, thresholds: tuple[float, float] = (0.25, 0.75)) -> np.ndarray:
    """Flatten a likelihood map to {0, 0.5, 1}.

    Values strictly below the low threshold become 0, strictly above the
    high threshold become 1, everything else (boundaries included) 0.5.
    """
    lmap = validate_gray(lmap)
    low, high = thresholds
    if not (0.0 < low < high < 1.0):
        raise InvalidInputError("thresholds must satisfy 0 < low < high < 1")
    out = np.full(lmap.shape, 0.5)
    out[lmap < low] = 0.0
    out[lmap > high] = 1.0
    return out


def _label_values(tri: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Value (0 or 1) of each label, index 0 unused."""
    n = int(labels.max())
    first = np.zeros(n + 1, dtype=np.int64)
    flat = labels.ravel()
    order = np.flatnonzero(flat)
    # last write wins is fine: all pixels of a label share one value
    first[flat[order]] = order
    vals = tri.ravel()[first]
    vals[0] = 0.5
    return vals


def merge_regions(tri: np.ndarray) -> np.ndarray:
    """Repaint black/white-adjacent region clusters to their majority value.

    Regions are 4-connected components of equal value; wherever a
    0-region touches a 1-region the two belong to one cluster, clusters
    being closed under such contacts.  Every cluster is repainted wholly
    to the value with more member pixels, ties to 1.  Background 0.5
    pixels never change, so the non-background pixel count is preserved.
    One such sweep is already stable: any two touching non-background
    pixels of different values would have placed their regions in one
    cluster, which gets a single value.
    """
    labels = ccl(tri)
    n = int(labels.max())
    if n == 0:
        return tri.copy()
    values = _label_values(tri, labels)

    parent = np.arange(n + 1, dtype=np.int64)

    def find(a: int) -> int:
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def union(a: int, b: int):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    # 4-adjacent label pairs with opposite values
    for la, lb in _adjacent_pairs(labels):
        if values[la] != values[lb]:
            union(la, lb)

    sizes = np.bincount(labels.ravel(), minlength=n + 1)
    ones = np.zeros(n + 1, dtype=np.int64)
    zeros = np.zeros(n + 1, dtype=np.int64)
    for lab in range(1, n + 1):
        root = find(lab)
        if values[lab] == 1.0:
            ones[root] += sizes[lab]
        else:
            zeros[root] += sizes[lab]
    new_value = np.empty(n + 1)
    new_value[0] = 0.5
    for lab in range(1, n + 1):
        root = find(lab)
        new_value[lab] = 1.0 if ones[root] >= zeros[root] else 0.0

    out = tri.copy()
    fg = labels > 0
    out[fg] = new_value[labels[fg]]
    return out


def _adjacent_pairs(labels: np.ndarray):
    """Unique unordered pairs of distinct nonzero labels that touch 4-ways."""
    pairs = set()
    a = labels[:, :-1].ravel()
    b = labels[:, 1:].ravel()
    m = (a > 0) & (b > 0) & (a != b)
    pairs.update(zip(a[m].tolist(), b[m].tolist()))
    a = labels[:-1, :].ravel()
    b = labels[1:, :].ravel()
    m = (a > 0) & (b > 0) & (a != b)
    pairs.update(zip(a[m].tolist(), b[m].tolist()))
    return pairs


def extract_representatives(tri: np.ndarray) -> CrossPointSet:
    """Centroid of every non-background region, valued by the region.

    Coordinate sums are integer arithmetic, so centroids are exact; the
    returned set carries per-region pixel areas for tie-breaking.
    """
    labels = ccl(tri)
    n = int(labels.max())
    if n == 0:
        return CrossPointSet([], [])
    values = _label_values(tri, labels)
    counts = np.bincount(labels.ravel(), minlength=n + 1)
    h, w = tri.shape
    ys, xs = np.mgrid[0:h, 0:w]
    sx = np.bincount(labels.ravel(), weights=xs.ravel(), minlength=n + 1)
    sy = np.bincount(labels.ravel(), weights=ys.ravel(), minlength=n + 1)
    pts = []
    areas = []
    for lab in range(1, n + 1):
        if counts[lab] == 0:
            continue
        pts.append((sx[lab] / counts[lab], sy[lab] / counts[lab], int(values[lab])))
        areas.append(int(counts[lab]))
    return CrossPointSet(pts, areas)


def _filter_border(pts: CrossPointSet, width: int, height: int, margin: float) -> CrossPointSet:
    """Drop candidates closer than `margin` to the image border."""
    keep_pts = []
    keep_areas = []
    areas = pts.areas if pts.areas is not None else [0] * len(pts)
    for (x, y, v), a in zip(pts, areas):
        if min(x, y, (width - 1) - x, (height - 1) - y) >= margin:
            keep_pts.append((x, y, v))
            keep_areas.append(a)
    return CrossPointSet(keep_pts, keep_areas if pts.areas is not None else None)


def reestimate_axes(
    crossings, width: int, height: int, smooth_halfwidth: int = 5
) -> YarnGrid:
    """Yarn axes from the distance transform of the candidate crossings.

    Candidates are rasterized to their nearest pixels; columns and rows
    of the distance image are summed, smoothed, and mined for local
    minima exactly like the image-domain estimate.  Both axes must yield
    at least two positions, otherwise no grid can be formed.
    """
    crossings = list(crossings)
    if not crossings:
        raise InvalidInputError("need at least one crossing")
    mask = np.zeros((height, width), dtype=np.uint8)
    for x, y, _ in crossings:
        px = int(np.rint(x))
        py = int(np.rint(y))
        if not (0 <= px < width and 0 <= py < height):
            raise InvalidInputError(f"crossing ({x}, {y}) outside {width}x{height} image")
        mask[py, px] = 1
    dist = distance_transform(mask)
    cols = [math.fsum(dist[:, j].tolist()) for j in range(width)]
    rows = [math.fsum(dist[i, :].tolist()) for i in range(height)]
    warp_x = profile_minima(smooth_profile(cols, smooth_halfwidth), smooth_halfwidth)
    weft_y = profile_minima(smooth_profile(rows, smooth_halfwidth), smooth_halfwidth)
    if len(warp_x) < 2 or len(weft_y) < 2:
        raise AxisEstimationError(
            f"cannot form a grid: {len(warp_x)} warp and {len(weft_y)} weft positions"
        )
    return YarnGrid(warp_x, weft_y)


def assign_grid(
    crossings,
    grid: YarnGrid,
    img: np.ndarray,
    colors: RepColors,
    s: float = 10.0,
) -> np.ndarray:
    """Fill the pattern matrix from the best candidate near each grid point.

    The nearest candidate within distance s wins; distance ties prefer
    the larger source region, then the earlier candidate.  A grid point
    with no candidate in range falls back to color proximity of its 3x3
    neighborhood, ties to 0.
    """
    if s <= 0:
        raise InvalidInputError(f"s must be > 0, got {s}")
    img = validate_gray(img)
    if not grid.warp_x or not grid.weft_y:
        raise InvalidInputError("grid must be non-empty")
    pts = list(crossings)
    areas = getattr(crossings, "areas", None)
    if areas is None:
        areas = [0] * len(pts)
    rows, cols = len(grid.weft_y), len(grid.warp_x)
    pattern = np.zeros((rows, cols), dtype=np.uint8)
    s2 = s * s
    if pts:
        px = np.array([p[0] for p in pts])
        py = np.array([p[1] for p in pts])
    for i, gy in enumerate(grid.weft_y):
        for j, gx in enumerate(grid.warp_x):
            best = None
            if pts:
                d2 = (px - gx) ** 2 + (py - gy) ** 2
                for k in np.flatnonzero(d2 <= s2):
                    key = (d2[k], -areas[k], k)
                    if best is None or key < best[0]:
                        best = (key, pts[k][2])
            if best is not None:
                pattern[i, j] = best[1]
            else:
                m = window_mean(img, gx, gy, radius=1.0)
                pattern[i, j] = 1 if abs(m - colors.weft) < abs(m - colors.warp) else 0
    return pattern


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (ContractViolationError, InvalidInputError):
        raise
    except Exception as e:
        raise DecodeStageError(name, e) from e


def decode(
    img: np.ndarray,
    backend: str = "classical",
    cfg: DecodeConfig | None = None,
    external_map: str | None = None,
    stage_sink: dict | None = None,
) -> tuple[np.ndarray, CrossPointSet, YarnGrid]:
    """Image to (pattern, crossings, grid) through the full pipeline.

    backend "classical" computes the likelihood map by image analysis;
    "external" loads it from `external_map`, which must match the image
    dimensions exactly.  Candidates closer than the border margin to the
    image edge are ignored.  Stage failures surface as DecodeStageError
    labeled with the stage name; a bad external map raises
    ContractViolationError directly.  When `stage_sink` is given the
    intermediate images land in it under "likelihood", "tri", "merged".
    """
    cfg = cfg or DecodeConfig()
    img = validate_gray(img)
    h, w = img.shape
    if backend == "classical":
        pre, colors, lmap = _stage("likelihood", _classical_front, img, cfg)
    elif backend == "external":
        if not external_map:
            raise InvalidInputError("external backend needs a likelihood map path")
        lmap = load_likelihood(external_map, w, h)
        pre = _stage("preprocess", preprocess, img, cfg.open_radius)
        colors = _stage("colors", estimate_rep_colors, pre, cfg.warp_dark)
    else:
        raise InvalidInputError(f"unknown backend '{backend}'")

    tri = _stage("trivalue", trivalue, lmap, cfg.trivalue_thresholds)
    merged = _stage("merge_regions", merge_regions, tri)
    if stage_sink is not None:
        stage_sink["likelihood"] = lmap
        stage_sink["tri"] = tri
        stage_sink["merged"] = merged
    candidates = _stage("extract_representatives", extract_representatives, merged)
    candidates = _filter_border(candidates, w, h, cfg.effective_border_margin)
    grid = _stage("reestimate_axes", reestimate_axes, candidates, w, h, cfg.smooth_halfwidth)
    pattern = _stage("assign_grid", assign_grid, candidates, grid, pre, colors, cfg.s)
    return pattern, candidates, grid
