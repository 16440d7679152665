"""Shared fixtures: canonical render geometries used across the suite."""

import numpy as np
import pytest

from weftcodec import RenderParams, random_pattern, render

# Geometry for exact round-trip tests: odd canvas keeps the yarn lattice
# mirror-symmetric, and the 11 px lattice margin clears the decoder's
# default 10 px border exclusion with a pixel to spare.
WIDE = dict(warp_spacing=22.0, weft_spacing=22.0, width=551, height=353)


def wide_params(**kw) -> RenderParams:
    merged = {**WIDE, **kw}
    return RenderParams(**merged)


@pytest.fixture(scope="session")
def clean_sample():
    """One jitter-free 16x25 render with its ground truth."""
    pattern = random_pattern(16, 25, 0.5, 123)
    img, truth = render(pattern, wide_params(seed=9))
    return img, truth, pattern


@pytest.fixture()
def rng():
    return np.random.default_rng(0)
