"""Per-clip feature extraction over a manifest, optionally in parallel.

Clips are independent jobs with no shared mutable state; results are
merged in clip-id order, so output is identical for any worker count.
Per-clip failures are collected and reported instead of aborting the run.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass

import numpy as np

from . import mfcc as mfcc_mod
from .audio import clip_window, read_wav
from .cluster import FeatureSet
from .dsp import (
    DEFAULT_WORKING_RATE,
    FilterBank,
    make_cochlear_bank,
    make_modulation_bank,
)
from .errors import ParameterError, PipelineError
from .store import ManifestEntry
from .texture import texture_vector

DEFAULT_CLUSTERS = 15


@dataclass(frozen=True)
class RunConfig:
    """Everything one pipeline invocation needs."""

    manifest_path: str
    feature_kind: str = "texture"
    clusters: int = DEFAULT_CLUSTERS
    seed: int = 0
    working_rate: int = DEFAULT_WORKING_RATE
    workers: int = 1
    output_dir: str = "."

    def __post_init__(self):
        if self.feature_kind not in ("texture", "mfcc"):
            raise ParameterError(f"unknown feature kind {self.feature_kind!r}")
        if self.clusters < 2:
            raise ParameterError(f"clusters must be >= 2, got {self.clusters}")
        if self.workers < 1:
            raise ParameterError(f"workers must be >= 1, got {self.workers}")
        if self.working_rate < 1:
            raise ParameterError(f"working_rate must be positive, got {self.working_rate}")


@dataclass(frozen=True)
class ExtractionContext:
    """Immutable per-run state shared by all workers."""

    feature_kind: str
    working_rate: int
    cochlear: FilterBank | None = None
    modulation: FilterBank | None = None


def make_context(feature_kind: str, working_rate: int = DEFAULT_WORKING_RATE) -> ExtractionContext:
    if feature_kind == "texture":
        return ExtractionContext(
            feature_kind="texture",
            working_rate=working_rate,
            cochlear=make_cochlear_bank(sample_rate=working_rate),
            modulation=make_modulation_bank(),
        )
    if feature_kind == "mfcc":
        return ExtractionContext(feature_kind="mfcc", working_rate=working_rate)
    raise ParameterError(f"unknown feature kind {feature_kind!r}")


def extract_one(entry: ManifestEntry, ctx: ExtractionContext) -> np.ndarray:
    """Feature row for a single manifest entry."""
    w = read_wav(entry.audio_path)
    clip = clip_window(w, entry.offset_s, entry.duration_s, ctx.working_rate)
    if ctx.feature_kind == "texture":
        return texture_vector(clip, ctx.cochlear, ctx.modulation).flat
    return mfcc_mod.flatten(mfcc_mod.mfcc_matrix(clip))


_WORKER_CTX: ExtractionContext | None = None


def _init_worker(ctx: ExtractionContext) -> None:
    global _WORKER_CTX
    _WORKER_CTX = ctx


def _run_job(entry: ManifestEntry):
    try:
        return entry.clip_id, "ok", extract_one(entry, _WORKER_CTX)
    except Exception as exc:  # per-clip isolation: record and continue
        return entry.clip_id, "error", f"{type(exc).__name__}: {exc}"


def extract_features(
    entries: list[ManifestEntry],
    feature_kind: str,
    working_rate: int = DEFAULT_WORKING_RATE,
    workers: int = 1,
) -> tuple[FeatureSet, list[tuple[str, str]]]:
    """Extract one feature row per entry.

    Returns the feature set (rows sorted by clip id) and a list of
    (clip_id, message) failures. Raises PipelineError if successful rows
    disagree on dimension (e.g. mixed clip durations for MFCC).
    """
    ctx = make_context(feature_kind, working_rate)
    if workers < 1:
        raise ParameterError(f"workers must be >= 1, got {workers}")

    if workers == 1 or len(entries) <= 1:
        _init_worker(ctx)
        outcomes = [_run_job(e) for e in entries]
    else:
        with multiprocessing.Pool(workers, initializer=_init_worker, initargs=(ctx,)) as pool:
            outcomes = pool.map(_run_job, entries)

    rows = {}
    failures = []
    for clip_id, status, payload in outcomes:
        if status == "ok":
            rows[clip_id] = payload
        else:
            failures.append((clip_id, payload))
    failures.sort()

    ordered_ids = sorted(rows)
    dim = None
    for cid in ordered_ids:
        if dim is None:
            dim = rows[cid].size
        elif rows[cid].size != dim:
            raise PipelineError(
                f"clip {cid!r} produced a {rows[cid].size}-dim row but the run "
                f"uses dim {dim}; {feature_kind} rows must be uniform"
            )
    matrix = (
        np.stack([rows[cid] for cid in ordered_ids])
        if ordered_ids
        else np.empty((0, dim or 0))
    )
    return FeatureSet(matrix, tuple(ordered_ids), feature_kind), failures
