"""Command-line interface.

    soundtex-train train --labels labels.txt --arch alexnet --epochs 200 --out runs/
    soundtex-train finetune --ckpt runs/pretext_alexnet.pt --labels voc_labels.txt --mode head
"""

from __future__ import annotations

import argparse
import sys

from .errors import TrainerError
from .models import ARCHITECTURES
from .train import TrainConfig, finetune, train_pretext


def _build_parser():
    parser = argparse.ArgumentParser(prog="soundtex-train",
                                     description="Pretext training on sound-cluster pseudo-labels")
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train the pretext classifier")
    p_train.add_argument("--labels", required=True, help="pseudo-labels file from `soundtex cluster`")
    p_train.add_argument("--arch", choices=ARCHITECTURES, default="alexnet")
    p_train.add_argument("--epochs", type=int, default=200)
    p_train.add_argument("--image-size", type=int, default=64)
    p_train.add_argument("--batch-size", type=int, default=32)
    p_train.add_argument("--lr", type=float, default=1e-3)
    p_train.add_argument("--val-fraction", type=float, default=0.2)
    p_train.add_argument("--seed", type=int, default=0)
    p_train.add_argument("--frames-root", default=None,
                         help="base for relative frame paths (default: labels file directory)")
    p_train.add_argument("--out", default=".", help="output directory")

    p_ft = sub.add_parser("finetune", help="fine-tune a pretext checkpoint")
    p_ft.add_argument("--ckpt", required=True)
    p_ft.add_argument("--labels", required=True)
    p_ft.add_argument("--mode", choices=("head", "all"), required=True)
    p_ft.add_argument("--arch", choices=ARCHITECTURES, default=None,
                      help="must match the checkpoint when given")
    p_ft.add_argument("--epochs", type=int, default=5)
    p_ft.add_argument("--image-size", type=int, default=None)
    p_ft.add_argument("--batch-size", type=int, default=32)
    p_ft.add_argument("--lr", type=float, default=1e-4)
    p_ft.add_argument("--seed", type=int, default=0)
    p_ft.add_argument("--frames-root", default=None)
    return parser


def _cmd_train(args) -> int:
    config = TrainConfig(
        labels_path=args.labels,
        arch=args.arch,
        epochs=args.epochs,
        image_size=args.image_size,
        batch_size=args.batch_size,
        lr=args.lr,
        val_fraction=args.val_fraction,
        seed=args.seed,
        frames_root=args.frames_root,
        output_dir=args.out,
    )
    result = train_pretext(config)
    for stats in result.history:
        print(
            f"epoch {stats.epoch:4d}  loss {stats.train_loss:.4f}  "
            f"train acc {stats.train_accuracy:.3f}  val acc {stats.val_accuracy:.3f}"
        )
    print(f"best val accuracy {result.best_val_accuracy:.3f}")
    print(f"checkpoint -> {result.checkpoint_path}")
    print(f"metrics    -> {result.metrics_path}")
    return 0


def _cmd_finetune(args) -> int:
    result = finetune(
        args.ckpt,
        args.labels,
        mode=args.mode,
        epochs=args.epochs,
        arch=args.arch,
        image_size=args.image_size,
        batch_size=args.batch_size,
        lr=args.lr,
        seed=args.seed,
        frames_root=args.frames_root,
    )
    for cls in sorted(result.per_class_ap):
        print(f"class {cls}: AP {result.per_class_ap[cls]:.3f}")
    print(
        f"mode={result.mode} mAP {result.mAP:.3f}  val acc {result.val_accuracy:.3f}  "
        f"trainable params {result.trainable_parameters}"
    )
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return {"train": _cmd_train, "finetune": _cmd_finetune}[args.command](args)
    except (TrainerError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
