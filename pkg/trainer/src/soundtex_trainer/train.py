"""Pretext training and fine-tuning loops.

Training runs to a fixed epoch budget (no early stopping): the point of
the pretext task is the representation, not squeezing out the last bit
of cluster-classification accuracy. AdamW with a one-cycle learning
rate schedule; data ordering is deterministic given the seed, model
initialization likewise (full cross-machine bit-determinism of the
backward pass is best-effort).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
import torch.nn as nn
from torch.utils.data import DataLoader, Subset

from .data import FrameDataset, check_images_exist, parse_labels_file, stratified_split
from .errors import ConfigError, TrainerError
from .metrics import accuracy, mean_average_precision
from .models import (
    build_model,
    classifier_parameters,
    freeze_backbone,
    trainable_parameter_count,
)

CHECKPOINT_FORMAT = "soundtex-trainer-v1"


@dataclass
class TrainConfig:
    labels_path: str
    arch: str = "alexnet"
    epochs: int = 200
    image_size: int = 64
    batch_size: int = 32
    lr: float = 1e-3
    weight_decay: float = 1e-2
    val_fraction: float = 0.2
    seed: int = 0
    frames_root: str | None = None
    output_dir: str = "."

    def __post_init__(self):
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if not 0.0 < self.val_fraction < 1.0:
            raise ConfigError(f"val_fraction must be in (0, 1), got {self.val_fraction}")
        if self.batch_size < 1 or self.image_size < 8:
            raise ConfigError("batch_size must be >= 1 and image_size >= 8")


@dataclass
class EpochStats:
    epoch: int
    train_loss: float
    train_accuracy: float
    val_accuracy: float
    lr: float


@dataclass
class TrainResult:
    checkpoint_path: Path
    metrics_path: Path
    best_val_accuracy: float
    classes_seen: set[int] = field(default_factory=set)
    history: list[EpochStats] = field(default_factory=list)


def _loader(dataset, batch_size, seed, shuffle):
    generator = torch.Generator()
    generator.manual_seed(seed)
    return DataLoader(
        dataset, batch_size=batch_size, shuffle=shuffle, generator=generator, num_workers=0
    )


def _run_epoch(model, loader, criterion, optimizer=None, scheduler=None):
    training = optimizer is not None
    model.train(training)
    losses, preds, targets = [], [], []
    with torch.set_grad_enabled(training):
        for images, labels in loader:
            logits = model(images)
            loss = criterion(logits, labels)
            loss_value = loss.detach().item()
            if not np.isfinite(loss_value):
                raise TrainerError(f"non-finite loss {loss_value!r}")
            if training:
                optimizer.zero_grad()
                loss.backward()
                optimizer.step()
                if scheduler is not None:
                    scheduler.step()
            losses.append(loss_value)
            preds.extend(logits.argmax(dim=1).tolist())
            targets.extend(labels.tolist())
    return float(np.mean(losses)), accuracy(preds, targets), targets


def train_pretext(config: TrainConfig) -> TrainResult:
    """Train the pretext classifier on pseudo-labels; save the best checkpoint."""
    k, frames = parse_labels_file(config.labels_path, config.frames_root)
    check_images_exist(frames)
    torch.manual_seed(config.seed)

    dataset = FrameDataset(frames, config.image_size)
    train_idx, val_idx = stratified_split(frames, config.val_fraction, config.seed)
    train_loader = _loader(Subset(dataset, train_idx), config.batch_size, config.seed, True)
    val_loader = _loader(Subset(dataset, val_idx), config.batch_size, config.seed, False)

    model = build_model(config.arch, k)
    criterion = nn.CrossEntropyLoss()
    optimizer = torch.optim.AdamW(
        model.parameters(), lr=config.lr, weight_decay=config.weight_decay
    )
    scheduler = torch.optim.lr_scheduler.OneCycleLR(
        optimizer, max_lr=config.lr * 10, total_steps=config.epochs * len(train_loader)
    )

    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    checkpoint_path = out_dir / f"pretext_{config.arch}.pt"
    metrics_path = out_dir / "metrics.jsonl"

    best_val = -1.0
    classes_seen: set[int] = set()
    history = []
    with metrics_path.open("w", encoding="utf-8") as log:
        for epoch in range(1, config.epochs + 1):
            train_loss, train_acc, seen = _run_epoch(
                model, train_loader, criterion, optimizer, scheduler
            )
            classes_seen.update(seen)
            _, val_acc, _ = _run_epoch(model, val_loader, criterion)
            stats = EpochStats(epoch, train_loss, train_acc, val_acc,
                               float(optimizer.param_groups[0]["lr"]))
            history.append(stats)
            log.write(json.dumps(stats.__dict__) + "\n")
            if val_acc > best_val:
                best_val = val_acc
                torch.save(
                    {
                        "format": CHECKPOINT_FORMAT,
                        "arch": config.arch,
                        "n_classes": k,
                        "image_size": config.image_size,
                        "epoch": epoch,
                        "val_accuracy": val_acc,
                        "model_state": model.state_dict(),
                    },
                    checkpoint_path,
                )
    return TrainResult(checkpoint_path, metrics_path, best_val, classes_seen, history)


def load_checkpoint(path):
    payload = torch.load(path, map_location="cpu", weights_only=True)
    if not isinstance(payload, dict) or payload.get("format") != CHECKPOINT_FORMAT:
        raise ConfigError(f"{path}: not a soundtex-trainer checkpoint")
    return payload


@dataclass
class FinetuneResult:
    mode: str
    mAP: float
    per_class_ap: dict[int, float]
    val_accuracy: float
    trainable_parameters: int


def finetune(
    checkpoint_path,
    labels_path,
    mode: str,
    epochs: int = 5,
    arch: str | None = None,
    image_size: int | None = None,
    batch_size: int = 32,
    lr: float = 1e-4,
    val_fraction: float = 0.3,
    seed: int = 0,
    frames_root=None,
) -> FinetuneResult:
    """Fine-tune a pretext checkpoint on a labelled image set.

    ``mode='head'`` freezes everything except the classifier;
    ``mode='all'`` trains the whole network. Reports one-vs-rest average
    precision per class and their mean on the validation split.
    """
    if mode not in ("head", "all"):
        raise ConfigError(f"mode must be 'head' or 'all', got {mode!r}")
    payload = load_checkpoint(checkpoint_path)
    if arch is not None and arch != payload["arch"]:
        raise ConfigError(
            f"architecture mismatch: checkpoint is {payload['arch']!r}, requested {arch!r}"
        )

    k_new, frames = parse_labels_file(labels_path, frames_root)
    check_images_exist(frames)
    torch.manual_seed(seed)

    model = build_model(payload["arch"], payload["n_classes"])
    model.load_state_dict(payload["model_state"])
    _replace_classifier_head(model, k_new)
    if mode == "head":
        freeze_backbone(model)

    size = image_size if image_size is not None else payload["image_size"]
    dataset = FrameDataset(frames, size)
    train_idx, val_idx = stratified_split(frames, val_fraction, seed)
    train_loader = _loader(Subset(dataset, train_idx), batch_size, seed, True)
    val_loader = _loader(Subset(dataset, val_idx), batch_size, seed, False)

    criterion = nn.CrossEntropyLoss()
    trainable = [p for p in model.parameters() if p.requires_grad]
    optimizer = torch.optim.AdamW(trainable, lr=lr)
    scheduler = torch.optim.lr_scheduler.OneCycleLR(
        optimizer, max_lr=lr * 10, total_steps=epochs * len(train_loader)
    )
    for _ in range(epochs):
        _run_epoch(model, train_loader, criterion, optimizer, scheduler)

    model.eval()
    scores, targets = [], []
    with torch.no_grad():
        for images, labels in val_loader:
            scores.append(torch.softmax(model(images), dim=1).numpy())
            targets.extend(labels.tolist())
    score_matrix = np.concatenate(scores, axis=0)
    m_ap, per_class = mean_average_precision(score_matrix, targets)
    val_acc = accuracy(score_matrix.argmax(axis=1), targets)
    return FinetuneResult(mode, m_ap, per_class, val_acc, trainable_parameter_count(model))


def _replace_classifier_head(model, n_classes: int) -> None:
    """Swap the final linear layer for a freshly initialized ``n_classes`` one."""
    head = model.classifier
    if isinstance(head, nn.Sequential):
        last = len(head) - 1
        head[last] = nn.Linear(head[last].in_features, n_classes)
    else:  # plain nn.Linear (resnet fc)
        new = nn.Linear(head.in_features, n_classes)
        model.backbone.fc = new
        model.classifier = new
