"""Pure-numpy fallback for the clustering kernels.

Mirrors the interface of the compiled ``soundtex._kernels`` extension;
which one is active is decided once at import time in ``cluster``.
"""

import numpy as np

COMPILED = False


def assign(X, centroids):
    """Nearest centroid per row by squared Euclidean distance.

    Ties go to the lowest centroid index. Returns (labels int64,
    squared distance to the winning centroid).
    """
    n = X.shape[0]
    labels = np.zeros(n, dtype=np.int64)
    best = np.full(n, np.inf)
    for j in range(centroids.shape[0]):
        dist = np.einsum("ij,ij->i", X - centroids[j], X - centroids[j])
        better = dist < best
        labels[better] = j
        best[better] = dist[better]
    return labels, best


def accumulate(X, labels, k):
    """Per-cluster coordinate sums and member counts, accumulated in row order."""
    sums = np.zeros((k, X.shape[1]))
    np.add.at(sums, labels, X)
    counts = np.bincount(labels, minlength=k).astype(np.int64)
    return sums, counts
