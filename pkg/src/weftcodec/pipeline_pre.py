"""Decode front end: denoising, yarn-axis estimation, colors, initial crossings.

Yarn axes come from a Laplacian-of-Gaussian edge-power profile: grooves
between yarns are thin dark lines, so summing |LOG| per column (or row)
gives a 1-D sequence whose local minima sit at yarn centers, where the
neighborhood is flattest.  All 1-D reductions use order-independent
summation so mirrored images produce exactly mirrored results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import AxisEstimationError, DegenerateColorsError, InvalidInputError
from .geometry import CrossPointSet, YarnGrid, window_mean
from .imgproc import morph_open, validate_gray

__all__ = [
    "RepColors",
    "preprocess",
    "estimate_yarn_axes",
    "estimate_rep_colors",
    "initial_crossings",
    "smooth_profile",
    "profile_minima",
]


@dataclass(frozen=True)
class RepColors:
    """Representative gray levels of the two yarns."""

    warp: float
    weft: float

    def __post_init__(self):
        if self.warp == self.weft:
            raise InvalidInputError("representative colors must differ")


def preprocess(img: np.ndarray, radius: float = 5.5) -> np.ndarray:
    """Remove thin bright fiber noise by a grayscale opening."""
    return morph_open(img, radius)


def smooth_profile(seq, halfwidth: int) -> list[float]:
    """Mean filter over +-halfwidth neighbors, windows truncated at the ends.

    Each output value is an exactly-rounded mean of its window, so the
    smoothed sequence of a reversed input is exactly the reversed output.
    """
    vals = [float(v) for v in seq]
    n = len(vals)
    out = []
    for i in range(n):
        lo = max(0, i - halfwidth)
        hi = min(n - 1, i + halfwidth)
        out.append(math.fsum(vals[lo : hi + 1]) / (hi - lo + 1))
    return out


def profile_minima(seq, halfwidth: int, tol: float = 1e-6) -> list[float]:
    """Strict local minima of a 1-D sequence, as (possibly half-integer) indices.

    Values are first quantized to `tol` so that floating-point dust does
    not split a flat valley.  A run of equal quantized values is a
    minimum when both neighbors are strictly larger; the run's center
    index is reported.  Runs touching the sequence ends and minima whose
    center lies within `halfwidth` of either end are discarded, since
    their smoothing windows were incomplete.
    """
    q = [round(float(v) / tol) for v in seq]
    n = len(q)
    minima: list[float] = []
    i = 0
    while i < n:
        j = i
        while j + 1 < n and q[j + 1] == q[i]:
            j += 1
        if i > 0 and j < n - 1 and q[i - 1] > q[i] and q[j + 1] > q[j]:
            center = (i + j) / 2.0
            if halfwidth <= center <= (n - 1) - halfwidth:
                minima.append(center)
        i = j + 1
    return minima


def _edge_power(img: np.ndarray, sigma: float) -> np.ndarray:
    """Magnitude of the raw LOG response; gain-invariant edge energy."""
    if sigma <= 0:
        raise InvalidInputError(f"sigma must be > 0, got {sigma}")
    truncate = math.ceil(3.0 * sigma) / sigma
    resp = ndimage.gaussian_laplace(img, sigma=sigma, mode="nearest", truncate=truncate)
    return np.abs(resp)


def _axis_profiles(mag: np.ndarray) -> tuple[list[float], list[float]]:
    """Column and row sums with order-independent rounding."""
    h, w = mag.shape
    cols = [math.fsum(mag[:, j].tolist()) for j in range(w)]
    rows = [math.fsum(mag[i, :].tolist()) for i in range(h)]
    return cols, rows


def estimate_yarn_axes(
    img: np.ndarray, sigma: float = 11.0, smooth_halfwidth: int = 5
) -> YarnGrid:
    """Locate warp columns and weft rows from edge-power minima.

    `sigma` sets the LOG scale and should stay well below the yarn
    spacing so band interiors read as flat; DecodeConfig carries the
    value calibrated for the bundled renderer.

    Raises AxisEstimationError when either axis yields no minimum.
    """
    img = validate_gray(img)
    mag = _edge_power(img, sigma)
    col_profile, row_profile = _axis_profiles(mag)
    warp_x = profile_minima(smooth_profile(col_profile, smooth_halfwidth), smooth_halfwidth)
    weft_y = profile_minima(smooth_profile(row_profile, smooth_halfwidth), smooth_halfwidth)
    if not warp_x or not weft_y:
        raise AxisEstimationError(
            f"found {len(warp_x)} warp and {len(weft_y)} weft positions; "
            "need at least one per axis"
        )
    return YarnGrid(warp_x, weft_y)


def _otsu_split(values: np.ndarray) -> int:
    """Index i maximizing between-class variance of values[:i] vs values[i:].

    `values` must be sorted ascending.  Works on the sorted sequence, so
    the outcome is independent of pixel order in the source image.
    """
    n = values.size
    csum = np.cumsum(values)
    total = csum[-1]
    counts = np.arange(1, n, dtype=np.float64)
    w0 = counts / n
    m0 = csum[:-1] / counts
    m1 = (total - csum[:-1]) / (n - counts)
    var = w0 * (1.0 - w0) * (m0 - m1) ** 2
    # only splits between distinct values are meaningful
    valid = values[1:] != values[:-1]
    var = np.where(valid, var, -1.0)
    best = int(np.argmax(var))
    if var[best] < 0:
        raise DegenerateColorsError("image intensity range is degenerate")
    return best + 1


def _cluster_mean(sorted_vals: np.ndarray) -> float:
    # a single-valued cluster must report that value exactly
    if sorted_vals[0] == sorted_vals[-1]:
        return float(sorted_vals[0])
    return math.fsum(sorted_vals.tolist()) / sorted_vals.size


def estimate_rep_colors(img: np.ndarray, warp_dark: bool = True) -> RepColors:
    """Two representative yarn colors from a 2-cluster intensity split.

    The threshold maximizes between-class variance; the two cluster
    means are reported, the darker one as the warp color by default.

    Raises DegenerateColorsError on a constant image.
    """
    img = validate_gray(img)
    values = np.sort(img.ravel())
    if values[0] == values[-1]:
        raise DegenerateColorsError("constant image has no two colors to separate")
    split = _otsu_split(values)
    dark = _cluster_mean(values[:split])
    bright = _cluster_mean(values[split:])
    if warp_dark:
        return RepColors(warp=dark, weft=bright)
    return RepColors(warp=bright, weft=dark)


def initial_crossings(img: np.ndarray, grid: YarnGrid, colors: RepColors) -> CrossPointSet:
    """One crossing per grid point, valued by local color proximity.

    The 3x3 mean around each grid point is compared against the two
    representative colors; exact ties go to 0 (warp on top).
    """
    img = validate_gray(img)
    if not grid.warp_x or not grid.weft_y:
        raise InvalidInputError("grid must have at least one warp and one weft")
    pts = []
    for y in grid.weft_y:
        for x in grid.warp_x:
            m = window_mean(img, x, y, radius=1.0)
            v = 1 if abs(m - colors.weft) < abs(m - colors.warp) else 0
            pts.append((x, y, v))
    return CrossPointSet(pts)
