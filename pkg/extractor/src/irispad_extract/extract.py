"""Extraction pipeline: manifest -> frozen backbone -> embedding file.

Samples are processed in manifest order; each contributes its clean
preprocessed image plus ``replicas`` augmented variants, so the output file
carries n*(1+replicas) rows. Inference runs single-threaded on CPU by
default to keep fixed-seed runs byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import torch

from .augment import AugmentConfig, augment, sample_seed
from .backbones import get_spec, load_backbone
from .embfile import EmbeddingWriter
from .errors import MissingImage
from .manifest_io import read_manifest
from .preprocess import load_image, preprocess


@dataclass(frozen=True)
class ExtractConfig:
    manifest: Path
    out: Path
    backbone_id: str = "dinov2-vitb14"
    checkpoint_tag: str = "laion400m_e32"  # informational for CLIP backbones
    replicas: int = 0
    seed: int = 42
    weights: str = "random"  # "random" | "pretrained"
    weights_dir: Path | None = None
    layers: int | None = None  # depth override for random-weight validation runs
    batch_size: int = 16
    red_channel_only: bool = False
    augment_cfg: AugmentConfig = field(default_factory=AugmentConfig)

    def __post_init__(self):
        if self.replicas < 0:
            raise ValueError("replicas must be >= 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


def run_extraction(cfg: ExtractConfig) -> Path:
    """Write the embedding file and return its path."""
    spec = get_spec(cfg.backbone_id)  # unknown id fails before any IO
    backbone = load_backbone(
        cfg.backbone_id,
        weights=cfg.weights,
        weights_dir=cfg.weights_dir,
        seed=cfg.seed,
        layers=cfg.layers,
    )
    torch.set_num_threads(1)  # fixed reduction order, byte-stable reruns

    entries = read_manifest(cfg.manifest)
    try:
        with EmbeddingWriter(
            cfg.out, backbone_id=cfg.backbone_id, dim=spec.dim, n=len(entries), replicas=cfg.replicas
        ) as writer:
            writer.write_sample_ids(e.sample_id for e in entries)
            pending: list[torch.Tensor] = []
            for entry in entries:
                if not entry.source_path.is_file():
                    raise MissingImage(entry.sample_id, str(entry.source_path))
                img = load_image(entry.source_path)
                pending.append(preprocess(img, spec, cfg.red_channel_only))
                for k in range(cfg.replicas):
                    variant = augment(img, sample_seed(cfg.seed, entry.sample_id, k), cfg.augment_cfg)
                    pending.append(preprocess(variant, spec, cfg.red_channel_only))
                # flush whole samples so the clean-then-replicas row order is kept
                if len(pending) >= cfg.batch_size:
                    writer.write_rows(backbone.embed(torch.stack(pending)))
                    pending = []
            if pending:
                writer.write_rows(backbone.embed(torch.stack(pending)))
    except BaseException:
        Path(cfg.out).unlink(missing_ok=True)  # never leave a truncated file behind
        raise
    return Path(cfg.out)
