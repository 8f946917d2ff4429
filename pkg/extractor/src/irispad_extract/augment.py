"""Deterministic training-time image augmentation.

One augmented variant = random crop (480 x 360 on full-size captures,
proportionally scaled on smaller images), illumination jitter, a rotation
within +/-5 degrees and a coin-flip horizontal mirror, applied in that
order at native resolution; resizing to the model input happens afterwards
in preprocess. Each variant is seeded by a stable hash of (global seed,
sample id, replica index), so extraction runs reproduce byte-identical
outputs.

The jitter ranges are this package's defaults, configurable because the
upstream experiment did not publish its values.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

from PIL import Image, ImageEnhance

CROP_SIZE = (480, 360)  # width, height at native capture resolution
CROP_FRACTIONS = (0.75, 0.75)  # 480/640, 360/480


@dataclass(frozen=True)
class AugmentConfig:
    brightness_jitter: float = 0.2
    contrast_jitter: float = 0.2
    max_rotation_deg: float = 5.0
    flip_prob: float = 0.5


@dataclass(frozen=True)
class AugmentParams:
    crop_left: int
    crop_top: int
    crop_width: int
    crop_height: int
    brightness: float
    contrast: float
    angle_deg: float
    flip: bool


def sample_seed(global_seed: int, sample_id: str, replica_index: int) -> int:
    digest = hashlib.blake2s(
        f"{global_seed}:{sample_id}:{replica_index}".encode("utf-8"), digest_size=8
    ).digest()
    return int.from_bytes(digest, "little")


def crop_size_for(width: int, height: int) -> tuple[int, int]:
    if width >= CROP_SIZE[0] and height >= CROP_SIZE[1]:
        return CROP_SIZE
    return max(1, round(width * CROP_FRACTIONS[0])), max(1, round(height * CROP_FRACTIONS[1]))


def draw_params(seed: int, width: int, height: int, cfg: AugmentConfig = AugmentConfig()) -> AugmentParams:
    rng = random.Random(seed)
    crop_w, crop_h = crop_size_for(width, height)
    left = rng.randint(0, width - crop_w)
    top = rng.randint(0, height - crop_h)
    brightness = rng.uniform(1.0 - cfg.brightness_jitter, 1.0 + cfg.brightness_jitter)
    contrast = rng.uniform(1.0 - cfg.contrast_jitter, 1.0 + cfg.contrast_jitter)
    angle = rng.uniform(-cfg.max_rotation_deg, cfg.max_rotation_deg)
    flip = rng.random() < cfg.flip_prob
    return AugmentParams(left, top, crop_w, crop_h, brightness, contrast, angle, flip)


def apply_params(img: Image.Image, params: AugmentParams) -> Image.Image:
    out = img.crop(
        (
            params.crop_left,
            params.crop_top,
            params.crop_left + params.crop_width,
            params.crop_top + params.crop_height,
        )
    )
    out = ImageEnhance.Brightness(out).enhance(params.brightness)
    out = ImageEnhance.Contrast(out).enhance(params.contrast)
    out = out.rotate(params.angle_deg, resample=Image.Resampling.BICUBIC)
    if params.flip:
        out = out.transpose(Image.Transpose.FLIP_LEFT_RIGHT)
    return out


def augment(img: Image.Image, seed: int, cfg: AugmentConfig = AugmentConfig()) -> Image.Image:
    """One randomly augmented variant; identical (image, seed) -> identical output."""
    return apply_params(img, draw_params(seed, img.width, img.height, cfg))
