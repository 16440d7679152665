"""Reusable raster primitives: morphology, LOG filtering, distance transform, labeling.

Images are 2-D float64 arrays in [0, 1], indexed ``[y, x]`` with pixel
centers at integer coordinates.  Binary masks are {0, 1} arrays, tri-valued
images are restricted to {0, 0.5, 1}.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import ndimage

from .errors import EmptyObjectError, InvalidInputError

__all__ = [
    "disk_footprint",
    "morph_open",
    "log_filter",
    "distance_transform",
    "ccl",
    "validate_gray",
]


def validate_gray(img: np.ndarray, name: str = "image") -> np.ndarray:
    """Check a grayscale image: 2-D, positive dims, values in [0, 1]."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2 or img.shape[0] <= 0 or img.shape[1] <= 0:
        raise InvalidInputError(f"{name} must be a non-empty 2-D array, got shape {img.shape}")
    if img.size and (img.min() < 0.0 or img.max() > 1.0):
        raise InvalidInputError(f"{name} values must lie in [0, 1]")
    return img


def disk_footprint(radius: float) -> np.ndarray:
    """Boolean disk: offsets whose center distance is <= radius.

    Fractional radii are honored (a 5.5 px disk includes offset (5, 2)
    but not (4, 4)).
    """
    if radius < 0:
        raise InvalidInputError(f"radius must be >= 0, got {radius}")
    r = int(math.floor(radius))
    y, x = np.ogrid[-r : r + 1, -r : r + 1]
    return (x * x + y * y) <= radius * radius


def morph_open(img: np.ndarray, radius: float) -> np.ndarray:
    """Grayscale opening: erosion then dilation with one disk element.

    Removes bright structures thinner than the disk while leaving darker
    and larger features intact.  Borders are edge-replicated.

    Parameters
    ----------
    img : ndarray, shape (H, W), values in [0, 1]
    radius : float
        Disk radius in pixels; 0 is the identity.

    Returns
    -------
    ndarray, shape (H, W), values in [0, 1]
    """
    img = validate_gray(img)
    footprint = disk_footprint(radius)
    eroded = ndimage.grey_erosion(img, footprint=footprint, mode="nearest")
    return ndimage.grey_dilation(eroded, footprint=footprint, mode="nearest")


def log_filter(img: np.ndarray, sigma: float) -> np.ndarray:
    """Laplacian-of-Gaussian response, affinely rescaled to [0, 1].

    The kernel is truncated at +-ceil(3*sigma) and borders are
    edge-replicated.  A degenerate (constant) response maps to a constant
    0.5 image instead of dividing by zero.

    Parameters
    ----------
    img : ndarray, shape (H, W), values in [0, 1]
    sigma : float
        Gaussian scale in pixels, must be > 0.
    """
    if sigma <= 0:
        raise InvalidInputError(f"sigma must be > 0, got {sigma}")
    img = validate_gray(img)
    truncate = math.ceil(3.0 * sigma) / sigma
    resp = ndimage.gaussian_laplace(img, sigma=sigma, mode="nearest", truncate=truncate)
    lo = resp.min()
    hi = resp.max()
    if hi - lo <= 0.0:
        return np.full_like(resp, 0.5)
    return (resp - lo) / (hi - lo)


def distance_transform(mask: np.ndarray) -> np.ndarray:
    """Exact Euclidean distance from every pixel to the nearest object pixel.

    Object pixels carry value 1 in `mask` and map to distance 0.  Pixels
    outside the image are treated as background.

    Raises
    ------
    EmptyObjectError
        If the mask contains no object pixel.
    """
    mask = np.asarray(mask)
    if mask.ndim != 2 or mask.size == 0:
        raise InvalidInputError(f"mask must be a non-empty 2-D array, got shape {mask.shape}")
    if not np.isin(mask, (0, 1)).all():
        raise InvalidInputError("mask values must be 0 or 1")
    if not mask.any():
        raise EmptyObjectError("mask contains no object pixel")
    # edt measures distance to the nearest zero, so feed it the complement
    return ndimage.distance_transform_edt(mask == 0)


def ccl(img: np.ndarray) -> np.ndarray:
    """Label 4-connected components of the non-background pixels of a tri-image.

    0-valued and 1-valued pixels are labeled separately (a region never
    mixes values); the 0.5 background keeps label 0.  Labels are the
    contiguous set 1..K, white (value 1) regions first.
    """
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2 or img.size == 0:
        raise InvalidInputError(f"tri-image must be a non-empty 2-D array, got shape {img.shape}")
    if not np.isin(img, (0.0, 0.5, 1.0)).all():
        raise InvalidInputError("tri-image values must be 0, 0.5 or 1")
    labels_white, n_white = ndimage.label(img == 1.0)
    labels_black, n_black = ndimage.label(img == 0.0)
    out = labels_white.astype(np.int32)
    black = labels_black > 0
    out[black] = labels_black[black].astype(np.int32) + n_white
    return out
