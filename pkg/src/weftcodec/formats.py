"""File formats: grayscale PNG, P1 PBM patterns, annotation JSON, manifests.

All writers go through an atomic replace so a crash never leaves a
half-written file behind.
"""

from __future__ import annotations

import json
import os
import tempfile
from typing import Iterable

import numpy as np
from PIL import Image

from .errors import InvalidInputError
from .geometry import CrossPointSet, YarnGrid

__all__ = [
    "write_png_gray",
    "read_png_gray",
    "write_pbm",
    "read_pbm",
    "write_annotation",
    "read_annotation",
    "write_manifest",
    "read_manifest",
    "atomic_write_bytes",
]


def atomic_write_bytes(path: str, data: bytes) -> None:
    """Write bytes to `path` via a temp file + rename in the same directory."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_png_gray(path: str, img: np.ndarray) -> None:
    """Store a [0,1] grayscale image as 8-bit PNG, value v as round(v*255)."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise InvalidInputError(f"expected a 2-D image, got shape {img.shape}")
    if img.size and (img.min() < 0.0 or img.max() > 1.0):
        raise InvalidInputError("image values must lie in [0, 1]")
    data = np.rint(img * 255.0).astype(np.uint8)
    import io

    buf = io.BytesIO()
    Image.fromarray(data, mode="L").save(buf, format="PNG")
    atomic_write_bytes(path, buf.getvalue())


def read_png_gray(path: str) -> np.ndarray:
    """Load an 8-bit single-channel PNG as floats, byte b mapping to b/255."""
    with Image.open(path) as im:
        if im.mode != "L":
            raise InvalidInputError(
                f"{path}: expected an 8-bit single-channel (mode L) PNG, got mode {im.mode}"
            )
        arr = np.asarray(im, dtype=np.uint8)
    return arr.astype(np.float64) / 255.0


def write_pbm(path: str, pattern: np.ndarray) -> None:
    """Store a binary pattern as plain-text P1 PBM (rows=wefts, cols=warps).

    Bit 1 means the weft passes over the warp at that cell.
    """
    pattern = np.asarray(pattern)
    if pattern.ndim != 2 or pattern.size == 0:
        raise InvalidInputError(f"pattern must be a non-empty 2-D array, got shape {pattern.shape}")
    if not np.isin(pattern, (0, 1)).all():
        raise InvalidInputError("pattern cells must be 0 or 1")
    rows, cols = pattern.shape
    lines = [f"P1\n{cols} {rows}\n"]
    for r in range(rows):
        lines.append(" ".join(str(int(c)) for c in pattern[r]) + "\n")
    atomic_write_bytes(path, "".join(lines).encode("ascii"))


def read_pbm(path: str) -> np.ndarray:
    """Parse a plain-text P1 PBM into a {0,1} uint8 matrix."""
    with open(path, "rb") as f:
        raw = f.read()
    try:
        text = raw.decode("ascii")
    except UnicodeDecodeError as e:
        raise InvalidInputError(f"{path}: not a plain-text PBM ({e})") from None
    # strip comments, then tokenize; P1 allows digits to be packed together
    tokens: list[str] = []
    for line in text.splitlines():
        hash_at = line.find("#")
        if hash_at != -1:
            line = line[:hash_at]
        tokens.extend(line.split())
    if not tokens or tokens[0] != "P1":
        raise InvalidInputError(f"{path}: missing P1 magic")
    fields = tokens[1:]
    if len(fields) < 2:
        raise InvalidInputError(f"{path}: truncated PBM header")
    try:
        cols = int(fields[0])
        rows = int(fields[1])
    except ValueError:
        raise InvalidInputError(f"{path}: bad PBM dimensions {fields[:2]}") from None
    if cols <= 0 or rows <= 0:
        raise InvalidInputError(f"{path}: non-positive PBM dimensions {cols}x{rows}")
    bits = "".join(fields[2:])
    if len(bits) != rows * cols or set(bits) - {"0", "1"}:
        raise InvalidInputError(
            f"{path}: expected {rows * cols} bits of 0/1 data, got {len(bits)}"
        )
    flat = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
    return flat.reshape(rows, cols).astype(np.uint8)


def write_annotation(
    path: str,
    image_path: str,
    grid: YarnGrid,
    crossings: Iterable,
    colors: tuple[float, float] | None,
) -> None:
    """Write the shared annotation JSON for an image.

    Layout: {image, warp_x, weft_y, crossings: [{x, y, v}], colors: {warp, weft}}.
    """
    doc = {
        "image": image_path,
        "warp_x": [float(x) for x in grid.warp_x],
        "weft_y": [float(y) for y in grid.weft_y],
        "crossings": [{"x": float(x), "y": float(y), "v": int(v)} for x, y, v in crossings],
        "colors": None
        if colors is None
        else {"warp": float(colors[0]), "weft": float(colors[1])},
    }
    atomic_write_bytes(path, (json.dumps(doc, indent=1) + "\n").encode("ascii"))


def read_annotation(path: str) -> dict:
    """Read an annotation JSON; returns grid, crossings and colors.

    Result keys: image (str), grid (YarnGrid), crossings (CrossPointSet),
    colors ((warp, weft) tuple or None).
    """
    with open(path, "r", encoding="ascii") as f:
        doc = json.load(f)
    for key in ("image", "warp_x", "weft_y", "crossings"):
        if key not in doc:
            raise InvalidInputError(f"{path}: annotation missing key '{key}'")
    grid = YarnGrid(doc["warp_x"], doc["weft_y"])
    crossings = CrossPointSet((c["x"], c["y"], c["v"]) for c in doc["crossings"])
    colors = doc.get("colors")
    if colors is not None:
        colors = (float(colors["warp"]), float(colors["weft"]))
    return {
        "image": doc["image"],
        "grid": grid,
        "crossings": crossings,
        "colors": colors,
    }


def write_manifest(path: str, records: Iterable[dict]) -> None:
    """Write a dataset manifest: one JSON object per line, {image, truth}."""
    lines = []
    for rec in records:
        lines.append(json.dumps({"image": rec["image"], "truth": rec["truth"]}) + "\n")
    atomic_write_bytes(path, "".join(lines).encode("ascii"))


def read_manifest(path: str) -> list[dict]:
    records = []
    with open(path, "r", encoding="ascii") as f:
        for line in f:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return records
