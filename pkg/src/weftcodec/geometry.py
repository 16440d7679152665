"""Yarn grid and crossing-point helpers shared by the encoder and decoder."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError

# A crossing is (x, y, v): sub-pixel position plus the binary over-under
# state, v=1 meaning the weft passes over the warp.
Crossing = tuple[float, float, int]


class CrossPointSet(list):
    """List of (x, y, v) crossings, optionally annotated with region areas.

    Behaves exactly like a list of tuples.  When produced from labeled
    regions the parallel ``areas`` list carries the pixel count of each
    source region; consumers that don't care may ignore it.
    """

    def __init__(self, points=(), areas=None):
        super().__init__((float(x), float(y), int(v)) for x, y, v in points)
        if areas is not None and len(areas) != len(self):
            raise InvalidInputError("areas must align one-to-one with points")
        self.areas = list(areas) if areas is not None else None


@dataclass
class YarnGrid:
    """Ordered warp column positions and weft row positions, in pixels."""

    warp_x: list[float] = field(default_factory=list)
    weft_y: list[float] = field(default_factory=list)

    def __post_init__(self):
        self.warp_x = [float(x) for x in self.warp_x]
        self.weft_y = [float(y) for y in self.weft_y]
        if any(b <= a for a, b in zip(self.warp_x, self.warp_x[1:])):
            raise InvalidInputError("warp_x must be strictly increasing")
        if any(b <= a for a, b in zip(self.weft_y, self.weft_y[1:])):
            raise InvalidInputError("weft_y must be strictly increasing")

    @property
    def shape(self) -> tuple[int, int]:
        """(rows, cols) of the grid-point lattice."""
        return len(self.weft_y), len(self.warp_x)

    def points(self) -> list[tuple[float, float]]:
        """Grid points in row-major order."""
        return [(x, y) for y in self.weft_y for x in self.warp_x]


def mirror_crossings_h(crossings, width: int) -> list[Crossing]:
    """Mirror a crossing set about the vertical axis: x -> (W-1)-x."""
    return [((width - 1) - x, y, v) for x, y, v in crossings]


def mirror_crossings_v(crossings, height: int) -> list[Crossing]:
    """Mirror a crossing set about the horizontal axis: y -> (H-1)-y."""
    return [(x, (height - 1) - y, v) for x, y, v in crossings]


def rotate_crossings_180(crossings, width: int, height: int) -> list[Crossing]:
    return [((width - 1) - x, (height - 1) - y, v) for x, y, v in crossings]


def mirror_grid_h(grid: YarnGrid, width: int) -> YarnGrid:
    return YarnGrid(sorted((width - 1) - x for x in grid.warp_x), list(grid.weft_y))


def mirror_grid_v(grid: YarnGrid, height: int) -> YarnGrid:
    return YarnGrid(list(grid.warp_x), sorted((height - 1) - y for y in grid.weft_y))


def window_mean(img: np.ndarray, x: float, y: float, radius: float = 1.0) -> float:
    """Mean intensity of pixels within Chebyshev distance `radius` of (x, y).

    For integer centers and radius 1 this is the usual 3x3 mean.  The
    symmetric pixel-selection rule keeps the sample exact under image
    mirroring even for fractional centers.
    """
    h, w = img.shape
    x0 = max(0, int(np.ceil(x - radius)))
    x1 = min(w - 1, int(np.floor(x + radius)))
    y0 = max(0, int(np.ceil(y - radius)))
    y1 = min(h - 1, int(np.floor(y + radius)))
    if x0 > x1 or y0 > y1:
        raise InvalidInputError(f"sample window at ({x}, {y}) falls outside the image")
    block = img[y0 : y1 + 1, x0 : x1 + 1]
    # fsum: the mean must not depend on pixel iteration order
    return math.fsum(block.ravel().tolist()) / block.size
