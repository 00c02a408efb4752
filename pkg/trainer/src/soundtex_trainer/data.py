"""Labels-file parsing and the frame dataset.

The trainer consumes the pseudo-label text format produced by
``soundtex cluster``: a header line ``k=<k>,seed=<seed>,feature_kind=<kind>``
followed by ``clip_id,frame_path,label`` records. Frame paths are used
as-is when absolute, otherwise resolved against ``frames_root``
(default: the labels file's directory).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from PIL import Image
from torch.utils.data import Dataset

from .errors import LabelsError


@dataclass(frozen=True)
class LabelledFrame:
    clip_id: str
    image_path: Path
    label: int


def parse_labels_file(path, frames_root=None) -> tuple[int, list[LabelledFrame]]:
    """Return (k, frames) from a pseudo-labels file."""
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("k="):
        raise LabelsError(f"{path}: missing 'k=...' header line")
    header = dict(item.partition("=")[::2] for item in lines[0].split(","))
    try:
        k = int(header["k"])
    except (KeyError, ValueError) as exc:
        raise LabelsError(f"{path}: bad header {lines[0]!r}") from exc

    root = Path(frames_root) if frames_root is not None else path.parent
    frames = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise LabelsError(f"{path}:{lineno}: expected clip_id,frame_path,label")
        clip_id, frame_path, label_text = parts
        try:
            label = int(label_text)
        except ValueError as exc:
            raise LabelsError(f"{path}:{lineno}: bad label {label_text!r}") from exc
        if not 0 <= label < k:
            raise LabelsError(f"{path}:{lineno}: label {label} outside [0, {k})")
        if not frame_path:
            raise LabelsError(f"{path}:{lineno}: empty frame path for {clip_id!r}")
        image_path = Path(frame_path)
        if not image_path.is_absolute():
            image_path = root / image_path
        frames.append(LabelledFrame(clip_id, image_path, label))
    if not frames:
        raise LabelsError(f"{path}: no records")
    return k, frames


def check_images_exist(frames: list[LabelledFrame]) -> None:
    """Fatal error listing every missing image."""
    missing = [str(f.image_path) for f in frames if not f.image_path.is_file()]
    if missing:
        listing = "\n  ".join(missing)
        raise LabelsError(f"{len(missing)} frame image(s) missing:\n  {listing}")


class FrameDataset(Dataset):
    """Images + integer pseudo-labels, resized and normalized to [-1, 1]."""

    def __init__(self, frames: list[LabelledFrame], image_size: int):
        self.frames = frames
        self.image_size = image_size

    def __len__(self) -> int:
        return len(self.frames)

    def __getitem__(self, index):
        frame = self.frames[index]
        with Image.open(frame.image_path) as img:
            img = img.convert("RGB").resize((self.image_size, self.image_size), Image.BILINEAR)
        array = np.asarray(img, dtype=np.float32) / 255.0
        tensor = torch.from_numpy(array).permute(2, 0, 1)
        return (tensor - 0.5) / 0.5, frame.label


def stratified_split(frames, val_fraction: float, seed: int):
    """Deterministic per-class split; every class lands in both halves
    when it has at least two members."""
    rng = np.random.default_rng(seed)
    by_label: dict[int, list[int]] = {}
    for i, frame in enumerate(frames):
        by_label.setdefault(frame.label, []).append(i)
    train_idx, val_idx = [], []
    for label in sorted(by_label):
        members = np.array(by_label[label])
        rng.shuffle(members)
        n_val = max(1, int(round(len(members) * val_fraction))) if len(members) > 1 else 0
        val_idx.extend(members[:n_val].tolist())
        train_idx.extend(members[n_val:].tolist())
    return sorted(train_idx), sorted(val_idx)
