"""On-disk formats: feature store, labels file, cluster model, manifest.

Feature store (binary, little-endian throughout):

    magic   8 bytes  b"SNDTEX01"
    kind    u8       0 = texture, 1 = mfcc
    dim     u32      feature dimension
    count   u64      number of rows
    ids     count entries of [u32 byte length | UTF-8 clip id]
    payload count * dim float32, row-major

Labels file (text): one header line ``k=<k>,seed=<seed>,feature_kind=<kind>``
followed by ``clip_id,frame_path,label`` records sorted by clip id.

Model file: canonical JSON (sorted keys, fixed separators); floats
round-trip exactly. All three writers are byte-deterministic.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cluster import ClusterModel, FeatureSet, Standardizer
from .errors import CorruptionError, FormatError, ParameterError

MAGIC = b"SNDTEX01"
_KIND_CODES = {"texture": 0, "mfcc": 1}
_KIND_NAMES = {code: name for name, code in _KIND_CODES.items()}
_HEADER = struct.Struct("<8sBIQ")

MANIFEST_COLUMNS = ("clip_id", "audio_path", "frame_path", "offset_s", "duration_s")
DEFAULT_CLIP_DURATION_S = 3.75


@dataclass(frozen=True)
class ManifestEntry:
    """One clip: where its audio and image frame live, and which window to cut."""

    clip_id: str
    audio_path: str
    frame_path: str
    offset_s: float = 0.0
    duration_s: float = DEFAULT_CLIP_DURATION_S

    def __post_init__(self):
        if not self.clip_id or not self.audio_path:
            raise ParameterError("clip_id and audio_path must be non-empty")
        if self.duration_s <= 0 or self.offset_s < 0:
            raise ParameterError(
                f"bad window for {self.clip_id}: offset={self.offset_s}, duration={self.duration_s}"
            )


def write_features(path, fs: FeatureSet) -> None:
    """Serialize a FeatureSet; byte-for-byte deterministic."""
    if fs.dim >= 2**32 or fs.n_clips >= 2**64:
        raise ParameterError("feature set too large for the store header")
    chunks = [_HEADER.pack(MAGIC, _KIND_CODES[fs.feature_kind], fs.dim, fs.n_clips)]
    for cid in fs.clip_ids:
        raw = cid.encode("utf-8")
        chunks.append(struct.pack("<I", len(raw)))
        chunks.append(raw)
    chunks.append(np.ascontiguousarray(fs.rows, dtype="<f4").tobytes())
    Path(path).write_bytes(b"".join(chunks))


def read_features(path) -> FeatureSet:
    """Parse and validate a feature store file."""
    blob = Path(path).read_bytes()
    if len(blob) < _HEADER.size or blob[:8] != MAGIC:
        raise FormatError(
            f"{path}: not a feature store (expected magic {MAGIC.decode()!r})"
        )
    _, kind_code, dim, count = _HEADER.unpack_from(blob)
    if kind_code not in _KIND_NAMES:
        raise FormatError(f"{path}: unknown feature kind code {kind_code}")
    ofs = _HEADER.size
    ids = []
    for _ in range(count):
        if ofs + 4 > len(blob):
            raise CorruptionError(f"{path}: truncated clip-id table")
        (id_len,) = struct.unpack_from("<I", blob, ofs)
        ofs += 4
        if ofs + id_len > len(blob):
            raise CorruptionError(f"{path}: truncated clip-id table")
        ids.append(blob[ofs : ofs + id_len].decode("utf-8"))
        ofs += id_len
    expected = count * dim * 4
    if len(blob) - ofs != expected:
        raise CorruptionError(
            f"{path}: payload is {len(blob) - ofs} bytes, expected {expected} "
            f"for {count} rows of dim {dim}"
        )
    rows = np.frombuffer(blob, dtype="<f4", count=count * dim, offset=ofs)
    rows = rows.astype(np.float64).reshape(count, dim)
    return FeatureSet(rows, tuple(ids), _KIND_NAMES[kind_code])


def write_labels(path, clip_ids, frame_paths, labels, k: int, seed: int, feature_kind: str) -> None:
    """Write the training-consumable pseudo-label file, sorted by clip id."""
    clip_ids = list(clip_ids)
    frame_paths = list(frame_paths)
    labels = [int(x) for x in labels]
    if not (len(clip_ids) == len(frame_paths) == len(labels)):
        raise ParameterError(
            f"length mismatch: {len(clip_ids)} ids, {len(frame_paths)} frames, {len(labels)} labels"
        )
    for lab in labels:
        if not 0 <= lab < k:
            raise ParameterError(f"label {lab} outside [0, {k})")
    for text in list(clip_ids) + list(frame_paths):
        if "," in text or "\n" in text:
            raise ParameterError(f"ids and paths may not contain commas or newlines: {text!r}")
    lines = [f"k={k},seed={seed},feature_kind={feature_kind}"]
    for cid, frame, lab in sorted(zip(clip_ids, frame_paths, labels)):
        lines.append(f"{cid},{frame},{lab}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_labels(path) -> tuple[dict, list[tuple[str, str, int]]]:
    """Parse a labels file into (header meta, [(clip_id, frame_path, label)])."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("k="):
        raise FormatError(f"{path}: missing labels header line")
    meta = {}
    for item in lines[0].split(","):
        key, _, value = item.partition("=")
        meta[key] = value
    try:
        meta["k"] = int(meta["k"])
        meta["seed"] = int(meta["seed"])
    except (KeyError, ValueError) as exc:
        raise FormatError(f"{path}: bad labels header: {lines[0]!r}") from exc
    entries = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise CorruptionError(f"{path}:{lineno}: expected clip_id,frame_path,label")
        try:
            label = int(parts[2])
        except ValueError as exc:
            raise CorruptionError(f"{path}:{lineno}: bad label {parts[2]!r}") from exc
        if not 0 <= label < meta["k"]:
            raise CorruptionError(f"{path}:{lineno}: label {label} outside [0, {meta['k']})")
        entries.append((parts[0], parts[1], label))
    return meta, entries


def write_model(path, model: ClusterModel, feature_kind: str) -> None:
    """Serialize a ClusterModel as canonical JSON."""
    payload = {
        "format": "soundtex-kmeans-v1",
        "feature_kind": feature_kind,
        "k": model.k,
        "dim": model.dim,
        "seed": model.seed,
        "n_iters": model.n_iters,
        "inertia": model.inertia,
        "inertia_history": list(model.inertia_history),
        "standardizer_mean": model.standardizer.mean.tolist(),
        "standardizer_scale": model.standardizer.scale.tolist(),
        "centroids": model.centroids.tolist(),
    }
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    Path(path).write_text(text + "\n", encoding="utf-8")


def read_model(path) -> tuple[ClusterModel, str]:
    """Load a ClusterModel plus the feature kind it was fitted on."""
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not a model file ({exc})") from exc
    if not isinstance(payload, dict) or payload.get("format") != "soundtex-kmeans-v1":
        raise FormatError(f"{path}: not a soundtex k-means model file")
    try:
        model = ClusterModel(
            k=int(payload["k"]),
            centroids=np.asarray(payload["centroids"], dtype=np.float64).reshape(
                payload["k"], payload["dim"]
            ),
            standardizer=Standardizer(
                mean=np.asarray(payload["standardizer_mean"], dtype=np.float64),
                scale=np.asarray(payload["standardizer_scale"], dtype=np.float64),
            ),
            inertia=float(payload["inertia"]),
            seed=int(payload["seed"]),
            n_iters=int(payload["n_iters"]),
            inertia_history=tuple(float(x) for x in payload["inertia_history"]),
        )
    except (KeyError, ValueError) as exc:
        raise CorruptionError(f"{path}: incomplete model file ({exc})") from exc
    return model, payload["feature_kind"]


def read_manifest(path) -> list[ManifestEntry]:
    """Parse the clip manifest (CSV with the documented header)."""
    import csv

    entries = []
    seen = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != MANIFEST_COLUMNS:
            raise FormatError(
                f"{path}: manifest header must be {','.join(MANIFEST_COLUMNS)}, "
                f"got {reader.fieldnames}"
            )
        for row in reader:
            entry = ManifestEntry(
                clip_id=row["clip_id"].strip(),
                audio_path=row["audio_path"].strip(),
                frame_path=row["frame_path"].strip(),
                offset_s=float(row["offset_s"]) if row["offset_s"].strip() else 0.0,
                duration_s=float(row["duration_s"]) if row["duration_s"].strip() else DEFAULT_CLIP_DURATION_S,
            )
            if entry.clip_id in seen:
                raise ParameterError(f"{path}: duplicate clip_id {entry.clip_id!r}")
            seen.add(entry.clip_id)
            entries.append(entry)
    return entries
