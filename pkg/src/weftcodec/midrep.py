"""Intermediate representations: crossing sets as images, and likelihood maps.

Three encodings of a crossing set into a raster: single pixels
(impulse), solid w x w blocks (box), and signed Gaussian bumps around
the 0.5 background.  The box form is the workhorse: it survives
thresholding and region analysis, and block centroids recover the
original points exactly when crossings are well separated.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import CollisionError, ContractViolationError, InvalidInputError
from .formats import read_png_gray
from .geometry import CrossPointSet
from .imgproc import validate_gray

__all__ = [
    "MidRepKind",
    "build_impulse",
    "build_box",
    "build_gaussian",
    "classical_likelihood",
    "load_likelihood",
]


@dataclass(frozen=True)
class MidRepKind:
    """Selector for a mid-representation: impulse, gaussian(sigma) or box(w)."""

    kind: str = "box"
    sigma: float = 5.0
    w: int = 9

    def __post_init__(self):
        if self.kind not in ("impulse", "gaussian", "box"):
            raise InvalidInputError(f"unknown mid-rep kind '{self.kind}'")
        if self.sigma <= 0:
            raise InvalidInputError("gaussian sigma must be > 0")
        if self.w < 3 or self.w % 2 == 0:
            raise InvalidInputError("box width must be odd and >= 3")

    def build(self, crossings, width: int, height: int) -> np.ndarray:
        if self.kind == "impulse":
            return build_impulse(crossings, width, height)
        if self.kind == "gaussian":
            return build_gaussian(crossings, width, height, self.sigma)
        return build_box(crossings, width, height, self.w)


def _check_coords(crossings, width: int, height: int):
    for x, y, v in crossings:
        if not (0 <= x <= width - 1 and 0 <= y <= height - 1):
            raise InvalidInputError(f"crossing ({x}, {y}) outside {width}x{height} image")
        if v not in (0, 1):
            raise InvalidInputError(f"crossing value must be 0 or 1, got {v}")


def build_impulse(crossings, width: int, height: int) -> np.ndarray:
    """Single-pixel encoding: v at each rounded crossing, 0.5 elsewhere."""
    _check_coords(crossings, width, height)
    img = np.full((height, width), 0.5)
    seen = {}
    for x, y, v in crossings:
        px = int(np.rint(x))
        py = int(np.rint(y))
        if (px, py) in seen:
            raise CollisionError(f"crossings collide at pixel ({px}, {py})")
        seen[(px, py)] = v
        img[py, px] = float(v)
    return img


def _min_chebyshev_separation(crossings) -> float:
    best = math.inf
    pts = [(x, y) for x, y, _ in crossings]
    for i in range(len(pts)):
        xi, yi = pts[i]
        for j in range(i + 1, len(pts)):
            d = max(abs(xi - pts[j][0]), abs(yi - pts[j][1]))
            if d < best:
                best = d
    return best


def build_box(crossings, width: int, height: int, w: int = 9) -> np.ndarray:
    """Block encoding: the w x w window around each crossing takes its value.

    A pixel covered by both values reads 1 (windows of 1-crossings win).
    Separation below w means overlapping windows; that is legal but
    reported with a warning since centroid inversion then degrades.
    """
    if w < 1 or w % 2 == 0:
        raise InvalidInputError(f"box width must be odd and >= 1, got {w}")
    _check_coords(crossings, width, height)
    if len(crossings) > 1 and _min_chebyshev_separation(crossings) <= w:
        warnings.warn("crossing separation <= box width; windows overlap", stacklevel=2)
    img = np.full((height, width), 0.5)
    r = (w - 1) / 2.0
    # paint 0-windows first so 1-windows take precedence on overlap
    for want in (0, 1):
        for x, y, v in crossings:
            if v != want:
                continue
            x0 = max(0, math.ceil(x - r))
            x1 = min(width - 1, math.floor(x + r))
            y0 = max(0, math.ceil(y - r))
            y1 = min(height - 1, math.floor(y + r))
            img[y0 : y1 + 1, x0 : x1 + 1] = float(v)
    return img


def build_gaussian(crossings, width: int, height: int, sigma: float = 5.0) -> np.ndarray:
    """Bump encoding: signed Gaussians around 0.5, peak exactly v.

    Overlapping bumps keep the value farther from 0.5; equal deviations
    keep the first crossing in (x, y, v) order.
    """
    if sigma <= 0:
        raise InvalidInputError(f"sigma must be > 0, got {sigma}")
    _check_coords(crossings, width, height)
    dev = np.zeros((height, width))
    support = int(math.ceil(6.0 * sigma))
    for x, y, v in sorted(crossings):
        cx = int(np.rint(x))
        cy = int(np.rint(y))
        x0, x1 = max(0, cx - support), min(width - 1, cx + support)
        y0, y1 = max(0, cy - support), min(height - 1, cy + support)
        ys, xs = np.mgrid[y0 : y1 + 1, x0 : x1 + 1]
        bump = 0.5 * np.exp(-((xs - cx) ** 2 + (ys - cy) ** 2) / (2.0 * sigma * sigma))
        if v == 0:
            bump = -bump
        patch = dev[y0 : y1 + 1, x0 : x1 + 1]
        take = np.abs(bump) > np.abs(patch)
        patch[take] = bump[take]
    return np.clip(0.5 + dev, 0.0, 1.0)


def classical_likelihood(img: np.ndarray, cfg=None) -> np.ndarray:
    """Likelihood map from image analysis alone (no learned model).

    Composition: denoise, estimate axes and colors, read off initial
    crossings, then render them as a box mid-rep at the image size.
    """
    _, _, lmap = _classical_front(img, cfg)
    return lmap


def _classical_front(img: np.ndarray, cfg=None):
    """Shared front half: (preprocessed image, colors, likelihood map)."""
    from .postproc import DecodeConfig
    from .pipeline_pre import (
        estimate_rep_colors,
        estimate_yarn_axes,
        initial_crossings,
        preprocess,
    )

    cfg = cfg or DecodeConfig()
    img = validate_gray(img)
    pre = preprocess(img, cfg.open_radius)
    # colors first: a degenerate (constant) image should fail as a color
    # problem, not an axis problem
    colors = estimate_rep_colors(pre, cfg.warp_dark)
    grid = estimate_yarn_axes(pre, cfg.log_sigma, cfg.smooth_halfwidth)
    pts = initial_crossings(pre, grid, colors)
    h, w = img.shape
    lmap = build_box(pts, w, h, cfg.box_w)
    return pre, colors, lmap


def load_likelihood(path: str, expected_width: int, expected_height: int) -> np.ndarray:
    """Load an externally produced likelihood map and check its contract.

    The producer must emit an 8-bit single-channel PNG with exactly the
    dimensions of the image it was computed from.
    """
    try:
        lmap = read_png_gray(path)
    except InvalidInputError as e:
        raise ContractViolationError(str(e)) from None
    h, w = lmap.shape
    if (w, h) != (expected_width, expected_height):
        raise ContractViolationError(
            f"likelihood map is {w}x{h}, expected {expected_width}x{expected_height}"
        )
    return lmap
