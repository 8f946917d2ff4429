"""Procedurally generated fixture images for pipeline validation.

Synthetic eye-like pictures (radial gradients + seeded noise) in a mix of
sizes and modes, alternating bona fide / printed-attack labels. Generated
locally, so the fixture set carries no licensing or privacy constraints.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np
from PIL import Image

# (width, height, mode) per fixture slot; cycled when count > len
FIXTURE_SHAPES = [
    (640, 480, "L"),
    (640, 480, "L"),
    (640, 480, "RGB"),
    (1280, 957, "RGB"),
    (224, 224, "L"),
    (320, 240, "L"),
    (100, 80, "L"),
    (480, 360, "RGB"),
    (800, 600, "L"),
    (640, 480, "RGB"),
]


def make_fixture_image(width: int, height: int, mode: str, seed: int) -> Image.Image:
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float32)
    cx, cy = width / 2 + rng.uniform(-20, 20), height / 2 + rng.uniform(-20, 20)
    radius = np.hypot(xx - cx, yy - cy) / (0.5 * min(width, height))
    iris = np.clip(1.2 - radius, 0.0, 1.0) * 180
    pupil = (radius < rng.uniform(0.15, 0.3)) * -120
    noise = rng.normal(0, 12, size=(height, width))
    gray = np.clip(40 + iris + pupil + noise, 0, 255).astype(np.uint8)
    if mode == "L":
        return Image.fromarray(gray, "L")
    rgb = np.stack([gray, (gray * 0.8).astype(np.uint8), (gray * 0.6).astype(np.uint8)], axis=-1)
    return Image.fromarray(rgb, "RGB")


def write_fixture_set(out_dir: str | Path, count: int = 10, seed: int = 1234) -> Path:
    """Write PNG images plus a manifest CSV; returns the manifest path."""
    out_dir = Path(out_dir)
    (out_dir / "images").mkdir(parents=True, exist_ok=True)
    manifest_path = out_dir / "manifest.csv"
    with open(manifest_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample_id", "label", "pai_species", "partition", "sensor", "source_path"])
        for i in range(count):
            width, height, mode = FIXTURE_SHAPES[i % len(FIXTURE_SHAPES)]
            img = make_fixture_image(width, height, mode, seed + i)
            rel = f"images/fx{i:03d}.png"
            img.save(out_dir / rel)
            attack = i % 2 == 1
            writer.writerow(
                [
                    f"fx{i:03d}",
                    "attack" if attack else "bona_fide",
                    "printed" if attack else "none",
                    ("train", "val", "test")[i % 3],
                    "synthetic",
                    rel,
                ]
            )
    return manifest_path
