import numpy as np
import pytest
from PIL import Image

# distinct, pairwise well-separated RGB anchors for synthetic classes
CLASS_COLORS = [(220, 30, 30), (30, 200, 30), (40, 60, 220), (230, 220, 40)]


def make_solid_color_dataset(root, n_classes=3, per_class=10, size=48, seed=0):
    """Write solid-color PNGs (with mild pixel noise) and a labels file.

    Returns the labels file path. The labels file uses the pseudo-label
    text format emitted by the feature pipeline.
    """
    rng = np.random.default_rng(seed)
    frames_dir = root / "frames"
    frames_dir.mkdir(parents=True, exist_ok=True)
    lines = [f"k={n_classes},seed=0,feature_kind=texture"]
    for cls in range(n_classes):
        base = np.array(CLASS_COLORS[cls], dtype=np.float64)
        for i in range(per_class):
            pixels = base + rng.normal(0.0, 8.0, size=(size, size, 3))
            img = Image.fromarray(np.clip(pixels, 0, 255).astype(np.uint8))
            name = f"c{cls}_{i:02d}.png"
            img.save(frames_dir / name)
            lines.append(f"clip_c{cls}_{i:02d},frames/{name},{cls}")
    labels_path = root / "labels.txt"
    labels_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return labels_path


@pytest.fixture
def solid_color_labels(tmp_path):
    return make_solid_color_dataset(tmp_path, n_classes=3, per_class=10)
