"""Evaluation: point matching at radius s, ROC-style sweeps, pattern scores.

Matching is greedy one-to-one by increasing distance.  Rates are
reported against the truth count and always sum to exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError
from .geometry import YarnGrid

__all__ = [
    "MatchReport",
    "PatternReport",
    "match_points",
    "roc_curve",
    "pattern_metrics",
    "kfold_split",
]


@dataclass(frozen=True)
class MatchReport:
    s: float
    correct_rate: float
    error_rate: float
    missed_rate: float
    pairs: list[tuple[int, int]] = field(default_factory=list)


@dataclass(frozen=True)
class PatternReport:
    accuracy: float
    f_measure: float
    c00: int
    c11: int
    e01: int
    e10: int


def _as_points(seq) -> list[tuple[float, float, int]]:
    out = []
    for p in seq:
        x, y, v = p
        if v not in (0, 1):
            raise InvalidInputError(f"crossing value must be 0 or 1, got {v!r}")
        out.append((float(x), float(y), int(v)))
    return out


def match_points(truth, predicted, s: float, paper_matching: bool = False) -> MatchReport:
    """Score predicted crossings against truth within radius s.

    Default matching is one-to-one: candidate pairs within s are taken
    greedily by increasing distance (ties by truth index, then predicted
    index), each point used once.  A matched pair with equal values is
    correct, with different values an error; unmatched truths are
    missed.  `paper_matching` instead gives every truth its nearest
    in-range prediction, predictions reusable.
    """
    if s <= 0:
        raise InvalidInputError(f"s must be > 0, got {s}")
    t = _as_points(truth)
    p = _as_points(predicted)
    if not t:
        raise InvalidInputError("truth must be non-empty")
    s2 = s * s
    pairs: list[tuple[int, int]] = []
    if paper_matching:
        for ti, (tx, ty, _) in enumerate(t):
            best = None
            for pi, (px, py, _) in enumerate(p):
                d2 = (px - tx) ** 2 + (py - ty) ** 2
                if d2 <= s2 and (best is None or (d2, pi) < best):
                    best = (d2, pi)
            if best is not None:
                pairs.append((ti, best[1]))
    else:
        cand = []
        for ti, (tx, ty, _) in enumerate(t):
            for pi, (px, py, _) in enumerate(p):
                d2 = (px - tx) ** 2 + (py - ty) ** 2
                if d2 <= s2:
                    cand.append((d2, ti, pi))
        cand.sort()
        used_t: set[int] = set()
        used_p: set[int] = set()
        for _, ti, pi in cand:
            if ti in used_t or pi in used_p:
                continue
            used_t.add(ti)
            used_p.add(pi)
            pairs.append((ti, pi))
        pairs.sort()
    correct = sum(1 for ti, pi in pairs if t[ti][2] == p[pi][2])
    wrong = len(pairs) - correct
    n = len(t)
    correct_rate = correct / n
    error_rate = wrong / n
    return MatchReport(
        s=s,
        correct_rate=correct_rate,
        error_rate=error_rate,
        missed_rate=1.0 - (correct_rate + error_rate),
        pairs=pairs,
    )


def roc_curve(truth, predicted, s_values) -> list[MatchReport]:
    """match_points swept over the given radii, in the given order."""
    s_values = list(s_values)
    if not s_values:
        raise InvalidInputError("s_values must be non-empty")
    return [match_points(truth, predicted, float(s)) for s in s_values]


def _confusion(truth: np.ndarray, pred: np.ndarray) -> PatternReport:
    c00 = int(np.sum((truth == 0) & (pred == 0)))
    c11 = int(np.sum((truth == 1) & (pred == 1)))
    e01 = int(np.sum((truth == 0) & (pred == 1)))
    e10 = int(np.sum((truth == 1) & (pred == 0)))
    n = c00 + c11 + e01 + e10
    accuracy = (c00 + c11) / n
    denom_p = c11 + e01
    denom_r = c11 + e10
    if denom_p == 0 or denom_r == 0:
        f = 0.0
    else:
        prec = c11 / denom_p
        rec = c11 / denom_r
        f = 0.0 if prec + rec == 0 else 2 * prec * rec / (prec + rec)
    return PatternReport(accuracy=accuracy, f_measure=f, c00=c00, c11=c11, e01=e01, e10=e10)


def pattern_metrics(
    truth,
    pred: np.ndarray,
    *,
    truth_crossings=None,
    grid: YarnGrid | None = None,
) -> PatternReport:
    """Cell accuracy and F-measure of a decoded pattern.

    Array mode compares two binary matrices of equal shape.  Grid mode
    (pass `truth_crossings` and the decoded `grid`) scores each decoded
    cell against the truth crossing nearest its grid point, so a decode
    whose grid dimensions drifted can still be scored.
    """
    pred = np.asarray(pred)
    if pred.ndim != 2:
        raise InvalidInputError("pred must be a 2-D matrix")
    if not np.isin(pred, (0, 1)).all():
        raise InvalidInputError("pred must be binary")
    if truth_crossings is not None or grid is not None:
        if truth_crossings is None or grid is None:
            raise InvalidInputError("grid mode needs both truth_crossings and grid")
        t = _as_points(truth_crossings)
        if not t:
            raise InvalidInputError("truth_crossings must be non-empty")
        if pred.shape != (len(grid.weft_y), len(grid.warp_x)):
            raise InvalidInputError("pred shape must match the grid")
        tx = np.array([c[0] for c in t])
        ty = np.array([c[1] for c in t])
        tv = np.array([c[2] for c in t])
        ref = np.zeros_like(pred)
        for i, gy in enumerate(grid.weft_y):
            for j, gx in enumerate(grid.warp_x):
                d2 = (tx - gx) ** 2 + (ty - gy) ** 2
                ref[i, j] = tv[int(np.argmin(d2))]
        return _confusion(ref, pred)
    truth = np.asarray(truth)
    if truth.shape != pred.shape:
        raise InvalidInputError(
            f"shape mismatch: truth {truth.shape} vs pred {pred.shape}"
        )
    if not np.isin(truth, (0, 1)).all():
        raise InvalidInputError("truth must be binary")
    return _confusion(truth, pred)


def kfold_split(n_items: int, k: int = 11, seed: int = 0) -> list[tuple[list[int], list[int]]]:
    """Deterministic k-fold partition of range(n_items).

    Items are shuffled once by seed; the first n_items % k folds get one
    extra item.  Returns (train, test) index lists, both sorted, one
    pair per fold.
    """
    if k < 2:
        raise InvalidInputError(f"k must be >= 2, got {k}")
    if n_items < k:
        raise InvalidInputError(f"need at least k={k} items, got {n_items}")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n_items)
    base = n_items // k
    extra = n_items % k
    folds = []
    start = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        folds.append(perm[start : start + size])
        start += size
    out = []
    for i in range(k):
        test = sorted(int(j) for j in folds[i])
        train = sorted(int(j) for f in folds[:i] + folds[i + 1 :] for j in f)
        out.append((train, test))
    return out
