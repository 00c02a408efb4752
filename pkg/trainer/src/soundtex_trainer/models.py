"""Model zoo: a compact AlexNet-style CNN and a ResNet-18 variant.

Both expose a ``classifier`` attribute so head-only fine-tuning can
freeze everything else.
"""

from __future__ import annotations

import torch.nn as nn
from torchvision.models import resnet18

from .errors import ConfigError

ARCHITECTURES = ("alexnet", "resnet18")


class AlexNetLike(nn.Module):
    """Five conv layers with the classic filter counts (64/192/384/256/256)
    and a compact fully connected head; adaptive pooling keeps it usable
    at small image sizes."""

    def __init__(self, n_classes: int):
        super().__init__()
        self.features = nn.Sequential(
            nn.Conv2d(3, 64, kernel_size=11, stride=4, padding=2),
            nn.ReLU(inplace=True),
            nn.MaxPool2d(kernel_size=3, stride=2),
            nn.Conv2d(64, 192, kernel_size=5, padding=2),
            nn.ReLU(inplace=True),
            nn.MaxPool2d(kernel_size=3, stride=2),
            nn.Conv2d(192, 384, kernel_size=3, padding=1),
            nn.ReLU(inplace=True),
            nn.Conv2d(384, 256, kernel_size=3, padding=1),
            nn.ReLU(inplace=True),
            nn.Conv2d(256, 256, kernel_size=3, padding=1),
            nn.ReLU(inplace=True),
        )
        self.avgpool = nn.AdaptiveAvgPool2d((2, 2))
        self.classifier = nn.Sequential(
            nn.Dropout(p=0.5),
            nn.Linear(256 * 2 * 2, 512),
            nn.ReLU(inplace=True),
            nn.Linear(512, n_classes),
        )

    def forward(self, x):
        x = self.avgpool(self.features(x))
        return self.classifier(x.flatten(1))


class ResNet18Like(nn.Module):
    def __init__(self, n_classes: int):
        super().__init__()
        self.backbone = resnet18(weights=None, num_classes=n_classes)
        # alias so the freeze logic below treats both archs uniformly
        self.classifier = self.backbone.fc

    def forward(self, x):
        return self.backbone(x)


def build_model(arch: str, n_classes: int) -> nn.Module:
    if arch == "alexnet":
        return AlexNetLike(n_classes)
    if arch == "resnet18":
        return ResNet18Like(n_classes)
    raise ConfigError(f"unknown architecture {arch!r}; choose from {ARCHITECTURES}")


def classifier_parameters(model: nn.Module):
    return list(model.classifier.parameters())


def freeze_backbone(model: nn.Module) -> None:
    """Head-only mode: only the classifier keeps requires_grad."""
    classifier_param_ids = {id(p) for p in classifier_parameters(model)}
    for param in model.parameters():
        param.requires_grad = id(param) in classifier_param_ids


def trainable_parameter_count(model: nn.Module) -> int:
    return sum(p.numel() for p in model.parameters() if p.requires_grad)
