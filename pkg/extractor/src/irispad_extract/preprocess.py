"""Image decoding and model-input preparation.

Images are brought to 3 channels (single-channel inputs replicated; the
printed-attack captures were shot in color but only their red channel
carries the NIR-like signal, so an optional red-channel mode selects it
before replication), resized to 224 x 224 bicubic and normalized with the
backbone's published constants.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import torch
from PIL import Image, UnidentifiedImageError

from .backbones import INPUT_SIZE, BackboneSpec
from .errors import UndecodableImage


def load_image(path: str | Path) -> Image.Image:
    try:
        with Image.open(path) as img:
            if img.mode in ("I", "I;16"):
                # 16-bit NIR captures: rescale to 8 bits (PIL's own I->L cast clips)
                arr = np.asarray(img, dtype=np.float32)
                divisor = 256.0 if arr.max() > 255 else 1.0
                return Image.fromarray(np.clip(arr / divisor, 0, 255).astype(np.uint8), "L")
            return img.copy()
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise UndecodableImage(f"{path}: {exc}") from exc


def to_three_channels(img: Image.Image, red_channel_only: bool = False) -> Image.Image:
    if img.mode in ("RGB", "RGBA", "P"):
        rgb = img.convert("RGB")
        if red_channel_only:
            red = rgb.getchannel("R")
            return Image.merge("RGB", (red, red, red))
        return rgb
    gray = img.convert("L")
    return Image.merge("RGB", (gray, gray, gray))


def preprocess(img: Image.Image, spec: BackboneSpec, red_channel_only: bool = False) -> torch.Tensor:
    """(3, 224, 224) float32 tensor, normalized for the given backbone."""
    rgb = to_three_channels(img, red_channel_only)
    if rgb.size != (INPUT_SIZE, INPUT_SIZE):
        rgb = rgb.resize((INPUT_SIZE, INPUT_SIZE), Image.Resampling.BICUBIC)
    arr = np.asarray(rgb, dtype=np.float32) / 255.0
    arr = (arr - np.asarray(spec.mean, dtype=np.float32)) / np.asarray(spec.std, dtype=np.float32)
    return torch.from_numpy(arr.transpose(2, 0, 1).copy())
