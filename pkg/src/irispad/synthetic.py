"""Synthetic two-Gaussian-blob embeddings for pipeline validation.

Bona fide and attack samples are isotropic unit-variance Gaussians whose
means sit ``separation`` apart along a fixed direction, so a linear scorer
can drive every error metric to zero once the draw is cleanly separated.
Useful as an end-to-end fixture when the real (access-restricted) iris data
is unavailable.
"""

from __future__ import annotations

import numpy as np

from .embeddings import EmbeddingSet
from .manifest import Label, Manifest, SampleRecord

BLOB_BACKBONE_ID = "synthetic-blobs"


def make_blob_dataset(
    dim: int = 16,
    n_train: int = 400,
    n_val: int = 200,
    n_test: int = 200,
    separation: float = 6.0,
    seed: int = 20240117,
    replicas: int = 0,
    attack_species: str = "printed",
) -> tuple[Manifest, EmbeddingSet]:
    """Build a manifest plus embedding set; each split is half attacks.

    ``replicas`` > 0 adds that many noise-jittered rows per sample, mimicking
    augmented embeddings.
    """
    rng = np.random.default_rng(seed)
    direction = np.ones(dim) / np.sqrt(dim)
    offset = 0.5 * separation * direction

    records: list[SampleRecord] = []
    ids: list[str] = []
    rows: list[np.ndarray] = []
    for split, count in (("train", n_train), ("val", n_val), ("test", n_test)):
        n_attack = count // 2
        for i in range(count):
            is_attack = i < n_attack
            sid = f"blob-{split}-{i:04d}"
            base = rng.standard_normal(dim) + (offset if is_attack else -offset)
            ids.append(sid)
            rows.append(base)
            for _ in range(replicas):
                rows.append(base + 0.1 * rng.standard_normal(dim))
            records.append(
                SampleRecord(
                    sample_id=sid,
                    label=Label.ATTACK if is_attack else Label.BONA_FIDE,
                    pai_species=attack_species if is_attack else "none",
                    partition=split,
                    sensor="synthetic",
                    source_path=f"images/{sid}.png",
                )
            )

    emb = EmbeddingSet(
        backbone_id=BLOB_BACKBONE_ID,
        dim=dim,
        sample_ids=tuple(ids),
        vectors=np.asarray(rows, dtype=np.float32),
        augmented_replicas=replicas,
    )
    emb.validate()
    return Manifest(records=tuple(records)), emb


def blob_margin(manifest: Manifest, emb: EmbeddingSet) -> float:
    """Worst-case margin between classes along the blob axis (>0 = separable)."""
    direction = np.ones(emb.dim) / np.sqrt(emb.dim)
    stride = 1 + emb.augmented_replicas
    proj = emb.vectors[::stride] @ direction
    labels = np.array([r.label is Label.ATTACK for r in manifest.records])
    return float(proj[labels].min() - proj[~labels].max())
