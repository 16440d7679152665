"""End-to-end acceptance gates, one printed pass/fail line each."""

import time
from dataclasses import replace

import numpy as np
import pytest

from weftcodec import (
    ContractViolationError,
    CrossPointSet,
    RenderParams,
    build_box,
    decode,
    distance_transform,
    extract_representatives,
    kfold_split,
    match_points,
    merge_regions,
    pattern_metrics,
    random_pattern,
    render,
    trivalue,
)
from weftcodec.formats import write_png_gray

from conftest import wide_params
from test_imgproc import brute_distance
from test_postproc import _naive_merge_to_fixpoint


def _report(capsys, num, name, ok, detail):
    with capsys.disabled():
        print(f"\nACCEPTANCE {num} {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"acceptance {num} {name}: {detail}"


def test_criterion_1_round_trip_identity(capsys):
    t0 = time.monotonic()
    exact = 0
    for seed in range(50):
        pattern = random_pattern(16, 25, 0.5, seed)
        img, _ = render(pattern, wide_params(seed=seed + 1000))
        got, _, _ = decode(img)
        exact += int(got.shape == pattern.shape and np.array_equal(got, pattern))
    dt = time.monotonic() - t0
    ok = exact == 50 and dt < 60.0
    _report(capsys, 1, "round-trip identity", ok, f"{exact}/50 exact in {dt:.1f}s")


def test_criterion_2_degraded_round_trip(capsys):
    accs = []
    for seed in range(50):
        pattern = random_pattern(16, 25, 0.5, seed)
        params = wide_params(jitter_amp=2.0, fiber_noise_density=0.02, seed=seed + 2000)
        img, truth = render(pattern, params)
        try:
            got, _, grid = decode(img)
            rep = pattern_metrics(None, got, truth_crossings=truth.crossings, grid=grid)
            accs.append(rep.accuracy)
        except Exception:
            accs.append(0.0)
    mean = sum(accs) / len(accs)
    ok = mean >= 0.95
    _report(capsys, 2, "degraded round trip", ok, f"mean accuracy {mean:.4f} over 50 seeds")


def test_criterion_3_merge_fixed_point(capsys):
    rng = np.random.default_rng(11)
    bad = 0
    for _ in range(1000):
        h = int(rng.integers(4, 65))
        w = int(rng.integers(4, 65))
        tri = rng.choice([0.0, 0.5, 1.0], size=(h, w), p=[0.3, 0.4, 0.3])
        got = merge_regions(tri)
        clash = False
        for a, b in ((got[:, :-1], got[:, 1:]), (got[:-1, :], got[1:, :])):
            clash = clash or bool(((a != 0.5) & (b != 0.5) & (a != b)).any())
        if clash or not np.array_equal(got, _naive_merge_to_fixpoint(tri)):
            bad += 1
    _report(capsys, 3, "merge fixed point", bad == 0, f"{1000 - bad}/1000 images agree")


def test_criterion_4_midrep_inversion(capsys):
    rng = np.random.default_rng(4)
    offsets = np.arange(-2.0, 2.5, 0.5)
    bad = 0
    for _ in range(200):
        pts = []
        for i in range(4):
            for j in range(5):
                x = 10.0 + 14.0 * j + float(rng.choice(offsets))
                y = 10.0 + 14.0 * i + float(rng.choice(offsets))
                pts.append((x, y, int(rng.integers(0, 2))))
        s = CrossPointSet(pts)
        got = extract_representatives(merge_regions(trivalue(build_box(s, 80, 64, 9))))
        if sorted(got) != sorted(pts):
            bad += 1
    _report(capsys, 4, "mid-rep inversion", bad == 0, f"{200 - bad}/200 sets exact")


def test_criterion_5_distance_transform(capsys):
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(100):
        mask = (rng.random((32, 32)) < 0.1).astype(np.uint8)
        if not mask.any():
            mask[16, 16] = 1
        err = float(np.abs(distance_transform(mask) - brute_distance(mask)).max())
        worst = max(worst, err)
    ok = worst <= 1e-9
    _report(capsys, 5, "distance transform", ok, f"max |diff| {worst:.2e} over 100 masks")


def test_criterion_6_metric_accounting(capsys):
    rng = np.random.default_rng(6)
    sums_exact = True
    monotone = True
    for trial in range(10):
        truth = [
            (10.0 + 15.0 * j, 10.0 + 15.0 * i, int(rng.integers(0, 2)))
            for i in range(5)
            for j in range(6)
        ]
        pred = [
            (x + rng.uniform(-6, 6), y + rng.uniform(-6, 6), v if rng.random() > 0.1 else 1 - v)
            for x, y, v in truth
            if rng.random() > 0.05
        ]
        last = -1.0
        for s in range(1, 21):
            r = match_points(truth, pred, float(s))
            if r.correct_rate + r.error_rate + r.missed_rate != 1.0:
                sums_exact = False
            if r.correct_rate < last:
                monotone = False
            last = r.correct_rate
    ok = sums_exact and monotone
    _report(
        capsys, 6, "metric accounting", ok,
        f"sums exact: {sums_exact}, monotone over s=1..20: {monotone}",
    )


def test_criterion_7_kfold(capsys):
    folds = kfold_split(176, k=11)
    sizes = [len(test) for _, test in folds]
    seen = sorted(i for _, test in folds for i in test)
    disjoint = len(seen) == len(set(seen))
    ok = len(folds) == 11 and sizes == [16] * 11 and disjoint and seen == list(range(176))
    _report(capsys, 7, "k-fold split", ok, f"11 folds sized {set(sizes)}, disjoint cover: {ok}")


def test_criterion_8_decode_speed(capsys):
    pattern = random_pattern(15, 25, 0.5, 8)
    img, _ = render(pattern, RenderParams(seed=88))  # default 512x320 canvas
    t0 = time.monotonic()
    got, _, _ = decode(img)
    dt = time.monotonic() - t0
    ok = dt <= 1.5 and got.shape == (15, 25)
    _report(capsys, 8, "decode speed", ok, f"512x320 classical decode in {dt:.2f}s")


def test_criterion_9_external_map_contract(capsys, tmp_path):
    rng = np.random.default_rng(9)
    pattern = random_pattern(15, 25, 0.5, 8)
    img, _ = render(pattern, RenderParams(seed=88))
    xs = [36.0 + 20.0 * j for j in range(22)]
    ys = [36.0 + 20.0 * i for i in range(13)]
    pts = [(x, y, int(rng.integers(0, 2))) for y in ys for x in xs]
    good = str(tmp_path / "map.png")
    write_png_gray(good, build_box(CrossPointSet(pts), 512, 320, 9))
    pat, _, grid = decode(img, backend="external", external_map=good)
    want = np.array([v for _, _, v in pts]).reshape(13, 22)
    decoded_ok = pat.shape == (13, 22) and np.array_equal(pat, want)

    bad = str(tmp_path / "bad.png")
    write_png_gray(bad, np.full((320, 500), 0.5))
    try:
        decode(img, backend="external", external_map=bad)
        rejected = False
    except ContractViolationError:
        rejected = True
    ok = decoded_ok and rejected
    _report(
        capsys, 9, "external map contract", ok,
        f"valid map decoded: {decoded_ok}, mismatch rejected: {rejected}",
    )
