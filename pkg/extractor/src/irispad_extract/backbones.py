"""Frozen backbone registry and loading policies.

Six visual backbones are supported: three DinoV2 ViTs (features = CLS token
of the last hidden state) and three CLIP visual encoders used without the
text tower (features = projected image embedding, matching the
"laion400m_e32" checkpoint family).

Weight sources:
  * ``pretrained`` — load transformers-format weights from a local
    directory (``weights_dir``); nothing is ever downloaded. Fails with
    BackboneLoadError when the directory is missing.
  * ``random`` — seeded random initialization of the same architecture,
    optionally depth-reduced via ``layers``. Embeddings are meaningless for
    classification but dimensionally and deterministically correct, which
    is what pipeline validation needs when the real checkpoints are not
    distributable.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from .errors import BackboneLoadError

IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)
OPENAI_CLIP_MEAN = (0.48145466, 0.4578275, 0.40821073)
OPENAI_CLIP_STD = (0.26862954, 0.26130258, 0.27577711)

INPUT_SIZE = 224


@dataclass(frozen=True)
class BackboneSpec:
    backbone_id: str
    family: str  # "dinov2" | "clip"
    dim: int
    patch_size: int
    hidden_size: int
    layers: int
    heads: int
    intermediate_size: int
    mean: tuple[float, float, float]
    std: tuple[float, float, float]
    pretrained_ref: str  # upstream checkpoint name, for documentation


REGISTRY = {
    spec.backbone_id: spec
    for spec in [
        BackboneSpec("dinov2-vits14", "dinov2", 384, 14, 384, 12, 6, 1536,
                     IMAGENET_MEAN, IMAGENET_STD, "facebook/dinov2-small"),
        BackboneSpec("dinov2-vitb14", "dinov2", 768, 14, 768, 12, 12, 3072,
                     IMAGENET_MEAN, IMAGENET_STD, "facebook/dinov2-base"),
        BackboneSpec("dinov2-vitl14", "dinov2", 1024, 14, 1024, 24, 16, 4096,
                     IMAGENET_MEAN, IMAGENET_STD, "facebook/dinov2-large"),
        BackboneSpec("clip-vit-b32", "clip", 512, 32, 768, 12, 12, 3072,
                     OPENAI_CLIP_MEAN, OPENAI_CLIP_STD, "CLIP-ViT-B-32 laion400m_e32"),
        BackboneSpec("clip-vit-b16", "clip", 512, 16, 768, 12, 12, 3072,
                     OPENAI_CLIP_MEAN, OPENAI_CLIP_STD, "CLIP-ViT-B-16 laion400m_e32"),
        BackboneSpec("clip-vit-l14", "clip", 768, 14, 1024, 24, 16, 4096,
                     OPENAI_CLIP_MEAN, OPENAI_CLIP_STD, "CLIP-ViT-L-14 laion400m_e32"),
    ]
}


def get_spec(backbone_id: str) -> BackboneSpec:
    spec = REGISTRY.get(backbone_id)
    if spec is None:
        raise BackboneLoadError(
            f"unknown backbone_id {backbone_id!r}; supported: {', '.join(sorted(REGISTRY))}"
        )
    return spec


class Backbone:
    """A frozen feature extractor: (b, 3, 224, 224) float32 -> (b, dim)."""

    def __init__(self, spec: BackboneSpec, model: torch.nn.Module):
        self.spec = spec
        self._model = model.eval()
        for p in self._model.parameters():
            p.requires_grad_(False)

    @torch.no_grad()
    def embed(self, batch: torch.Tensor) -> np.ndarray:
        out = self._model(pixel_values=batch)
        if self.spec.family == "dinov2":
            feats = out.last_hidden_state[:, 0]  # CLS token
        else:
            feats = out.image_embeds
        return feats.to(torch.float32).cpu().numpy()


def _build_random(spec: BackboneSpec, seed: int, layers: int | None) -> torch.nn.Module:
    from transformers import (
        CLIPVisionConfig,
        CLIPVisionModelWithProjection,
        Dinov2Config,
        Dinov2Model,
    )

    depth = spec.layers if layers is None else layers
    if depth < 1:
        raise BackboneLoadError(f"layers must be >= 1, got {depth}")
    torch.manual_seed(seed)
    if spec.family == "dinov2":
        config = Dinov2Config(
            hidden_size=spec.hidden_size,
            num_hidden_layers=depth,
            num_attention_heads=spec.heads,
            intermediate_size=spec.intermediate_size,
            patch_size=spec.patch_size,
            image_size=INPUT_SIZE,
        )
        return Dinov2Model(config)
    config = CLIPVisionConfig(
        hidden_size=spec.hidden_size,
        num_hidden_layers=depth,
        num_attention_heads=spec.heads,
        intermediate_size=spec.intermediate_size,
        patch_size=spec.patch_size,
        image_size=INPUT_SIZE,
        projection_dim=spec.dim,
    )
    return CLIPVisionModelWithProjection(config)


def _load_pretrained(spec: BackboneSpec, weights_dir: str | Path | None) -> torch.nn.Module:
    from transformers import CLIPVisionModelWithProjection, Dinov2Model

    if weights_dir is None or not Path(weights_dir).is_dir():
        raise BackboneLoadError(
            f"pretrained weights for {spec.backbone_id} need --weights-dir pointing at a local "
            f"transformers-format checkpoint (upstream: {spec.pretrained_ref}); nothing is downloaded"
        )
    cls = Dinov2Model if spec.family == "dinov2" else CLIPVisionModelWithProjection
    try:
        return cls.from_pretrained(str(weights_dir), local_files_only=True)
    except Exception as exc:
        raise BackboneLoadError(f"failed to load {spec.backbone_id} from {weights_dir}: {exc}") from exc


def load_backbone(
    backbone_id: str,
    weights: str = "random",
    weights_dir: str | Path | None = None,
    seed: int = 0,
    layers: int | None = None,
) -> Backbone:
    spec = get_spec(backbone_id)
    if weights == "random":
        model = _build_random(spec, seed, layers)
    elif weights == "pretrained":
        model = _load_pretrained(spec, weights_dir)
    else:
        raise BackboneLoadError(f"unknown weights policy {weights!r} (random | pretrained)")
    return Backbone(spec, model)
