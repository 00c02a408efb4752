"""Toy-scale pretext training on sound-cluster pseudo-labels."""

__version__ = "0.1.0"

from .data import FrameDataset, LabelledFrame, check_images_exist, parse_labels_file
from .errors import ConfigError, LabelsError, TrainerError
from .metrics import accuracy, average_precision, mean_average_precision
from .models import build_model, classifier_parameters, freeze_backbone, trainable_parameter_count
from .train import (
    FinetuneResult,
    TrainConfig,
    TrainResult,
    finetune,
    load_checkpoint,
    train_pretext,
)

__all__ = [
    "ConfigError",
    "FinetuneResult",
    "FrameDataset",
    "LabelledFrame",
    "LabelsError",
    "TrainConfig",
    "TrainResult",
    "TrainerError",
    "accuracy",
    "average_precision",
    "build_model",
    "check_images_exist",
    "classifier_parameters",
    "finetune",
    "freeze_backbone",
    "load_checkpoint",
    "mean_average_precision",
    "parse_labels_file",
    "trainable_parameter_count",
    "train_pretext",
]
