"""Classification metrics: accuracy, per-class average precision, mAP."""

from __future__ import annotations

import numpy as np


def accuracy(predictions, targets) -> float:
    predictions = np.asarray(predictions)
    targets = np.asarray(targets)
    return float((predictions == targets).mean()) if targets.size else 0.0


def average_precision(scores, positives) -> float:
    """Area under the precision-recall curve for one class.

    ``scores``: higher means more confident; ``positives``: boolean mask.
    Ties are broken by original order after a stable descending sort.
    """
    scores = np.asarray(scores, dtype=np.float64)
    positives = np.asarray(positives, dtype=bool)
    n_pos = int(positives.sum())
    if n_pos == 0:
        return 0.0
    order = np.argsort(-scores, kind="stable")
    hits = positives[order]
    cum_hits = np.cumsum(hits)
    precision = cum_hits / np.arange(1, hits.size + 1)
    return float(precision[hits].sum() / n_pos)


def mean_average_precision(score_matrix, targets) -> tuple[float, dict[int, float]]:
    """One-vs-rest AP per class from a [n, k] score matrix; mAP is their mean."""
    score_matrix = np.asarray(score_matrix, dtype=np.float64)
    targets = np.asarray(targets)
    per_class = {}
    for cls in range(score_matrix.shape[1]):
        per_class[cls] = average_precision(score_matrix[:, cls], targets == cls)
    return float(np.mean(list(per_class.values()))), per_class
