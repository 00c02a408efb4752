"""Command-line interface.

    soundtex extract --manifest M --features {texture|mfcc} --rate 16000 --workers N --out DIR
    soundtex cluster --store F --clusters 15 --seed S --out DIR [--manifest M]
    soundtex inspect FILE

Exit codes: 0 success, 1 fatal configuration/IO error, 2 extraction
finished but some clips failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .cluster import kmeans_fit_labels, standardize
from .dsp import DEFAULT_WORKING_RATE
from .errors import SoundtexError
from .pipeline import DEFAULT_CLUSTERS, extract_features
from .store import (
    MAGIC,
    read_features,
    read_labels,
    read_manifest,
    read_model,
    write_features,
    write_labels,
    write_model,
)
from .texture import segment_slices

WORKERS_ENV = "SOUNDTEX_WORKERS"


def _default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise SoundtexError(f"{WORKERS_ENV} must be an integer, got {env!r}")
        if value < 1:
            raise SoundtexError(f"{WORKERS_ENV} must be >= 1, got {value}")
        return value
    return os.cpu_count() or 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="soundtex",
        description="Sound-texture / MFCC feature extraction and k-means pseudo-labeling",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ext = sub.add_parser("extract", help="extract one feature row per manifest clip")
    p_ext.add_argument("--manifest", required=True, help="CSV manifest of clips")
    p_ext.add_argument(
        "--features", choices=("texture", "mfcc"), default="texture", help="feature kind"
    )
    p_ext.add_argument(
        "--rate", type=int, default=DEFAULT_WORKING_RATE, help="working sample rate in Hz"
    )
    p_ext.add_argument(
        "--workers",
        type=int,
        default=None,
        help=f"parallel workers (default: ${WORKERS_ENV} or CPU count)",
    )
    p_ext.add_argument("--out", required=True, help="output directory")

    p_clu = sub.add_parser("cluster", help="standardize, fit k-means, emit pseudo-labels")
    p_clu.add_argument("--store", required=True, help="feature store file from `extract`")
    p_clu.add_argument("--clusters", type=int, default=DEFAULT_CLUSTERS, help="number of clusters")
    p_clu.add_argument("--seed", type=int, default=0, help="k-means++ seed")
    p_clu.add_argument(
        "--manifest", default=None, help="optional manifest, used to attach frame paths to labels"
    )
    p_clu.add_argument("--out", required=True, help="output directory")

    p_ins = sub.add_parser("inspect", help="summarize a store, labels, or model file")
    p_ins.add_argument("file", help="file to inspect")
    return parser


def _cmd_extract(args) -> int:
    entries = read_manifest(args.manifest)
    workers = args.workers if args.workers is not None else _default_workers()
    if workers < 1:
        raise SoundtexError(f"--workers must be >= 1, got {workers}")
    fs, failures = extract_features(
        entries, args.features, working_rate=args.rate, workers=workers
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    store_path = out_dir / f"features_{args.features}.bin"
    write_features(store_path, fs)
    print(f"extracted {fs.n_clips}/{len(entries)} clips, dim {fs.dim} -> {store_path}")
    if failures:
        for clip_id, message in failures:
            print(f"FAILED {clip_id}: {message}", file=sys.stderr)
        print(f"{len(failures)} clip(s) failed", file=sys.stderr)
        return 2
    return 0


def _cmd_cluster(args) -> int:
    fs = read_features(args.store)
    if fs.n_clips < args.clusters:
        raise SoundtexError(
            f"cannot fit {args.clusters} clusters to {fs.n_clips} rows in {args.store}"
        )
    standardized, std = standardize(fs)
    model, labels = kmeans_fit_labels(standardized, args.clusters, args.seed, standardizer=std)

    frame_by_id = {}
    if args.manifest:
        frame_by_id = {e.clip_id: e.frame_path for e in read_manifest(args.manifest)}
    frames = [frame_by_id.get(cid, "") for cid in fs.clip_ids]

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    labels_path = out_dir / "labels.txt"
    model_path = out_dir / "model.json"
    write_labels(
        labels_path, fs.clip_ids, frames, labels, k=args.clusters, seed=args.seed,
        feature_kind=fs.feature_kind,
    )
    write_model(model_path, model, fs.feature_kind)

    sizes = np.bincount(labels, minlength=args.clusters)
    print(f"k={args.clusters} seed={args.seed} inertia={model.inertia:.6g} iters={model.n_iters}")
    for j, size in enumerate(sizes):
        print(f"cluster {j}: {size} clips")
    print(f"labels -> {labels_path}")
    print(f"model  -> {model_path}")
    return 0


def _segment_report(fs) -> list[str]:
    lines = []
    for name, seg in segment_slices().items():
        block = fs.rows[:, seg]
        lines.append(
            f"  {name:<10} dims {seg.start:>3}..{seg.stop - 1:<3} "
            f"min {block.min():.6g} max {block.max():.6g} mean {block.mean():.6g}"
        )
    return lines


def _cmd_inspect(args) -> int:
    path = Path(args.file)
    head = path.read_bytes()[:8]
    if head == MAGIC:
        fs = read_features(path)
        print(f"feature store: kind={fs.feature_kind} count={fs.n_clips} dim={fs.dim}")
        if fs.n_clips and fs.feature_kind == "texture" and fs.dim == 502:
            print("\n".join(_segment_report(fs)))
        elif fs.n_clips:
            print(
                f"  values min {fs.rows.min():.6g} max {fs.rows.max():.6g} "
                f"mean {fs.rows.mean():.6g}"
            )
        return 0
    text_head = head.decode("utf-8", errors="replace")
    if text_head.startswith("{"):
        model, feature_kind = read_model(path)
        print(
            f"cluster model: kind={feature_kind} k={model.k} dim={model.dim} "
            f"seed={model.seed} iters={model.n_iters} inertia={model.inertia:.6g}"
        )
        return 0
    if text_head.startswith("k="):
        meta, entries = read_labels(path)
        sizes = np.bincount([lab for _, _, lab in entries], minlength=meta["k"])
        print(
            f"labels: k={meta['k']} seed={meta['seed']} "
            f"feature_kind={meta.get('feature_kind')} count={len(entries)}"
        )
        for j, size in enumerate(sizes):
            print(f"cluster {j}: {size} clips")
        return 0
    raise SoundtexError(f"{path}: not a soundtex store, labels, or model file")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"extract": _cmd_extract, "cluster": _cmd_cluster, "inspect": _cmd_inspect}
    try:
        return handlers[args.command](args)
    except (SoundtexError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
