"""File formats: gray PNG, P1 pattern files, annotations, manifests."""

import os

import numpy as np
import pytest
from PIL import Image

from weftcodec import InvalidInputError, YarnGrid
from weftcodec.formats import (
    atomic_write_bytes,
    read_annotation,
    read_manifest,
    read_pbm,
    read_png_gray,
    write_annotation,
    write_manifest,
    write_pbm,
    write_png_gray,
)


def test_png_round_trip_quantizes_to_bytes(tmp_path, rng):
    img = rng.random((13, 17))
    path = str(tmp_path / "a.png")
    write_png_gray(path, img)
    back = read_png_gray(path)
    assert back.shape == img.shape
    assert np.array_equal(np.rint(img * 255) / 255, back)


def test_png_write_read_identity_on_byte_values(tmp_path, rng):
    img = rng.integers(0, 256, size=(8, 9)).astype(float) / 255
    path = str(tmp_path / "b.png")
    write_png_gray(path, img)
    assert np.array_equal(read_png_gray(path), img)
    # second write of the loaded image is byte-identical
    path2 = str(tmp_path / "c.png")
    write_png_gray(path2, read_png_gray(path))
    assert open(path, "rb").read() == open(path2, "rb").read()


def test_png_rejects_non_grayscale(tmp_path):
    path = str(tmp_path / "rgb.png")
    Image.new("RGB", (4, 4), (10, 20, 30)).save(path)
    with pytest.raises(InvalidInputError):
        read_png_gray(path)


def test_pbm_layout_and_round_trip(tmp_path):
    pattern = np.array([[1, 0, 1], [0, 0, 1]], dtype=np.uint8)
    path = str(tmp_path / "p.pbm")
    write_pbm(path, pattern)
    text = open(path).read()
    assert text.startswith("P1")
    assert "3 2" in text.splitlines()[1]  # header is cols rows
    assert np.array_equal(read_pbm(path), pattern)


def test_pbm_accepts_comments_and_packed_bits(tmp_path):
    path = str(tmp_path / "q.pbm")
    with open(path, "w") as f:
        f.write("P1\n# a comment\n4 2\n1010\n0110\n")
    assert np.array_equal(read_pbm(path), [[1, 0, 1, 0], [0, 1, 1, 0]])


def test_pbm_rejects_malformed(tmp_path):
    cases = {
        "magic.pbm": "P4\n2 2\n00\n00\n",
        "count.pbm": "P1\n2 2\n0 0 0\n",
        "chars.pbm": "P1\n2 2\n0 0\n0 2\n",
        "header.pbm": "P1\n2\n0 0\n",
    }
    for name, content in cases.items():
        path = str(tmp_path / name)
        with open(path, "w") as f:
            f.write(content)
        with pytest.raises(InvalidInputError):
            read_pbm(path)


def test_annotation_round_trip(tmp_path):
    path = str(tmp_path / "a.json")
    grid = YarnGrid([10.0, 30.5], [5.0, 25.0, 45.0])
    crossings = [(10.0, 5.0, 1), (30.5, 25.0, 0)]
    write_annotation(path, "img.png", grid, crossings, (0.15, 0.85))
    doc = read_annotation(path)
    assert doc["image"] == "img.png"
    assert doc["grid"].warp_x == grid.warp_x and doc["grid"].weft_y == grid.weft_y
    assert list(doc["crossings"]) == crossings
    assert doc["colors"] == (0.15, 0.85)


def test_annotation_colors_nullable(tmp_path):
    path = str(tmp_path / "b.json")
    write_annotation(path, "img.png", YarnGrid([1.0], [2.0]), [(1.0, 2.0, 0)], None)
    assert read_annotation(path)["colors"] is None


def test_annotation_missing_key_rejected(tmp_path):
    path = str(tmp_path / "c.json")
    with open(path, "w") as f:
        f.write('{"image": "x.png", "warp_x": []}')
    with pytest.raises(InvalidInputError):
        read_annotation(path)


def test_manifest_round_trip_preserves_order(tmp_path):
    path = str(tmp_path / "m.jsonl")
    records = [{"image": f"s{i}.png", "truth": f"s{i}.json"} for i in range(5)]
    write_manifest(path, records)
    assert read_manifest(path) == records


def test_atomic_write_replaces_and_leaves_no_residue(tmp_path):
    path = str(tmp_path / "f.bin")
    atomic_write_bytes(path, b"one")
    atomic_write_bytes(path, b"two")
    assert open(path, "rb").read() == b"two"
    assert os.listdir(tmp_path) == ["f.bin"]
