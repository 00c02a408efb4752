"""Feature standardization and k-means pseudo-labeling.

Fitting is deterministic given (data, k, seed): centroids are seeded
with k-means++ driven by ``numpy.random.default_rng(seed)``, then Lloyd
iterations run until the relative inertia improvement drops below the
tolerance. Empty clusters are re-seeded from the point currently
farthest from its centroid.

The assignment/accumulation inner loops dispatch to the compiled
``_kernels`` extension when it is importable, otherwise to the numpy
fallback; set SOUNDTEX_KERNELS={auto,compiled,python} to override.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, ParameterError


def _load_backend():
    choice = os.environ.get("SOUNDTEX_KERNELS", "auto").lower()
    if choice not in {"auto", "compiled", "python"}:
        raise ParameterError(
            f"SOUNDTEX_KERNELS must be auto, compiled, or python (got {choice!r})"
        )
    if choice != "python":
        try:
            from . import _kernels

            return _kernels
        except ImportError:
            if choice == "compiled":
                raise
    from . import _kernels_py

    return _kernels_py


_backend = _load_backend()
USING_COMPILED_KERNELS = bool(_backend.COMPILED)


@dataclass(frozen=True)
class FeatureSet:
    """One feature row per clip."""

    rows: np.ndarray  # [n_clips, d]
    clip_ids: tuple[str, ...]
    feature_kind: str  # "texture" or "mfcc"

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.float64)
        if rows.ndim != 2:
            raise ParameterError("rows must be a [n_clips, d] matrix")
        ids = tuple(self.clip_ids)
        if len(ids) != rows.shape[0]:
            raise ParameterError(
                f"{len(ids)} clip ids for {rows.shape[0]} feature rows"
            )
        if len(set(ids)) != len(ids):
            raise ParameterError("clip ids must be unique")
        if self.feature_kind not in ("texture", "mfcc"):
            raise ParameterError(f"unknown feature kind {self.feature_kind!r}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "clip_ids", ids)

    @property
    def n_clips(self) -> int:
        return self.rows.shape[0]

    @property
    def dim(self) -> int:
        return self.rows.shape[1]


@dataclass(frozen=True)
class Standardizer:
    """Per-dimension affine transform ``(x - mean) / scale``.

    Zero-variance dimensions are left untouched: mean 0, scale 1.
    """

    mean: np.ndarray
    scale: np.ndarray

    def __post_init__(self):
        scale = np.asarray(self.scale, dtype=np.float64)
        if np.any(scale <= 0):
            raise ParameterError("standardizer scales must be positive")
        object.__setattr__(self, "mean", np.asarray(self.mean, dtype=np.float64))
        object.__setattr__(self, "scale", scale)

    @classmethod
    def identity(cls, dim: int) -> "Standardizer":
        return cls(mean=np.zeros(dim), scale=np.ones(dim))

    def apply(self, rows: np.ndarray) -> np.ndarray:
        return (np.asarray(rows, dtype=np.float64) - self.mean) / self.scale


@dataclass(frozen=True)
class ClusterModel:
    """Fitted centroids over standardized features."""

    k: int
    centroids: np.ndarray  # [k, d]
    standardizer: Standardizer
    inertia: float
    seed: int
    n_iters: int
    inertia_history: tuple[float, ...] = field(default=())

    @property
    def dim(self) -> int:
        return self.centroids.shape[1]


def standardize(fs: FeatureSet) -> tuple[FeatureSet, Standardizer]:
    """Z-score each dimension; constant dimensions pass through unchanged."""
    if fs.n_clips < 2:
        raise ParameterError(f"standardize needs at least 2 rows, got {fs.n_clips}")
    if not np.all(np.isfinite(fs.rows)):
        raise DataError("features contain non-finite values")
    mu = fs.rows.mean(axis=0)
    sd = fs.rows.std(axis=0)
    constant = sd == 0
    std = Standardizer(
        mean=np.where(constant, 0.0, mu),
        scale=np.where(constant, 1.0, sd),
    )
    out = FeatureSet(std.apply(fs.rows), fs.clip_ids, fs.feature_kind)
    return out, std


def _kmeanspp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centroids = np.empty((k, X.shape[1]))
    idx = int(rng.integers(n))
    centroids[0] = X[idx]
    closest = np.einsum("ij,ij->i", X - centroids[0], X - centroids[0])
    for j in range(1, k):
        total = closest.sum()
        if total > 0:
            idx = int(rng.choice(n, p=closest / total))
        else:
            idx = int(rng.integers(n))  # all remaining points coincide with a centroid
        centroids[j] = X[idx]
        dist = np.einsum("ij,ij->i", X - X[idx], X - X[idx])
        np.minimum(closest, dist, out=closest)
    return centroids


def _repair_empty(X, labels, sqd, sums, counts, empties):
    """Re-seed empty clusters from the points farthest from their centroids."""
    order = np.argsort(-sqd, kind="stable")
    cursor = 0
    for e in empties:
        while cursor < order.size:
            p = int(order[cursor])
            cursor += 1
            old = int(labels[p])
            if counts[old] > 1:
                counts[old] -= 1
                sums[old] -= X[p]
                counts[e] = 1
                sums[e] = X[p]
                labels[p] = e
                sqd[p] = 0.0
                break
        else:
            raise DataError("cannot repair empty cluster: not enough distinct points")


def kmeans_fit(
    fs: FeatureSet,
    k: int,
    seed: int,
    max_iters: int = 300,
    tol: float = 1e-6,
    standardizer: Standardizer | None = None,
) -> ClusterModel:
    """Lloyd's algorithm with k-means++ seeding.

    ``fs`` is clustered as-is (standardize first); pass the standardizer
    used so the model can replay it at predict time. Raises
    ParameterError when k < 2 or there are fewer rows than clusters, and
    DataError on non-finite features.
    """
    X = np.ascontiguousarray(fs.rows, dtype=np.float64)
    if not np.all(np.isfinite(X)):
        raise DataError("features contain non-finite values")
    n = X.shape[0]
    if k < 2:
        raise ParameterError(f"k must be at least 2, got {k}")
    if n < k:
        raise ParameterError(f"cannot fit {k} clusters to {n} rows")
    if max_iters < 1:
        raise ParameterError(f"max_iters must be >= 1, got {max_iters}")

    rng = np.random.default_rng(seed)
    centroids = _kmeanspp_init(X, k, rng)

    labels, sqd = _backend.assign(X, centroids)
    history = [float(sqd.sum())]
    for _ in range(1, max_iters):
        sums, counts = _backend.accumulate(X, labels, k)
        empties = np.flatnonzero(counts == 0)
        if empties.size:
            _repair_empty(X, labels, sqd, sums, counts, empties)
        centroids = sums / counts[:, None]

        labels, sqd = _backend.assign(X, centroids)
        inertia = float(sqd.sum())
        prev = history[-1]
        assert inertia <= prev * (1.0 + 1e-12) + 1e-12, "inertia increased"
        history.append(inertia)
        if prev - inertia <= tol * prev:
            break

    return ClusterModel(
        k=k,
        centroids=centroids,
        standardizer=standardizer if standardizer is not None else Standardizer.identity(X.shape[1]),
        inertia=history[-1],
        seed=int(seed),
        n_iters=len(history),
        inertia_history=tuple(history),
    )


def kmeans_fit_labels(fs: FeatureSet, k: int, seed: int, **kwargs) -> tuple[ClusterModel, np.ndarray]:
    """Fit and also return the converged training assignments."""
    model = kmeans_fit(fs, k, seed, **kwargs)
    return model, kmeans_predict(model, fs)


def kmeans_predict(model: ClusterModel, fs: FeatureSet) -> np.ndarray:
    """Nearest-centroid label per row (rows must already be standardized).

    Ties break toward the lowest centroid index.
    """
    X = np.ascontiguousarray(fs.rows, dtype=np.float64)
    if X.shape[1] != model.dim:
        raise ParameterError(
            f"feature dimension {X.shape[1]} does not match model dimension {model.dim}"
        )
    labels, _ = _backend.assign(X, np.ascontiguousarray(model.centroids))
    return labels
