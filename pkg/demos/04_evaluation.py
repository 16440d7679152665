"""Score noisy predictions against ground truth across matching radii.

Perturbs a truth crossing set with position noise, dropouts, and value
flips, then prints the correct/error/missed table over s and a k-fold
split of a 176-item index set.
"""

import numpy as np

from weftcodec import RenderParams, kfold_split, random_pattern, render, roc_curve


def main():
    pattern = random_pattern(15, 25, 0.5, 12)
    _, truth = render(pattern, RenderParams(seed=12))
    rng = np.random.default_rng(0)

    pred = []
    for x, y, v in truth.crossings:
        if rng.random() < 0.05:
            continue  # dropped detection
        if rng.random() < 0.08:
            v = 1 - v  # value mistake
        pred.append((x + rng.normal(0, 2.0), y + rng.normal(0, 2.0), v))

    print(f"truth: {len(truth.crossings)} points, predicted: {len(pred)}")
    print(f"{'s':>4} {'correct':>8} {'error':>8} {'missed':>8}")
    for rep in roc_curve(truth.crossings, pred, range(1, 16)):
        print(f"{rep.s:4.0f} {rep.correct_rate:8.3f} {rep.error_rate:8.3f} {rep.missed_rate:8.3f}")

    folds = kfold_split(176, k=11)
    sizes = [len(test) for _, test in folds]
    print(f"\nk-fold: 176 items into {len(folds)} folds of {set(sizes)}")
    print(f"fold 0 test indices: {folds[0][1][:8]} ...")


if __name__ == "__main__":
    main()
