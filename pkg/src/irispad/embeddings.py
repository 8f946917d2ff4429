"""Binary interchange format for frozen-backbone feature vectors.

Layout (all integers little-endian):

    8 bytes   magic ``PADEMB\\x00\\x01``
    u32 x 4   version (=1), dim, n, r
    u16 + bytes        backbone_id (UTF-8, length-prefixed)
    n x (u16 + bytes)  sample_ids (UTF-8, length-prefixed)
    n*(1+r)*dim f32    row-major payload; per sample the clean row comes
                       first, followed by its r augmented rows

The format is stream-writable and has no external dependency. Files are
immutable once written; readers validate eagerly and fail with offsets.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    BadMagic,
    DimMismatch,
    EmbeddingFormatError,
    InvariantViolation,
    MissingEmbedding,
    TruncatedPayload,
    VersionUnsupported,
)
from .manifest import Label, Manifest

MAGIC = b"PADEMB\x00\x01"
FORMAT_VERSION = 1

# Output widths of the supported backbones; a recognized backbone_id whose
# file claims a different dim is rejected.
EXPECTED_DIMS = {
    "dinov2-vits14": 384,
    "dinov2-vitb14": 768,
    "dinov2-vitl14": 1024,
    "clip-vit-b32": 512,
    "clip-vit-b16": 512,
    "clip-vit-l14": 768,
}


@dataclass(frozen=True)
class EmbeddingSet:
    backbone_id: str
    dim: int
    sample_ids: tuple[str, ...]
    vectors: np.ndarray  # (n*(1+r), dim) float32
    augmented_replicas: int = 0

    @property
    def n(self) -> int:
        return len(self.sample_ids)

    def validate(self) -> None:
        if self.dim <= 0:
            raise InvariantViolation(f"dim must be positive, got {self.dim}")
        if self.augmented_replicas < 0:
            raise InvariantViolation("augmented_replicas must be >= 0")
        expected_rows = self.n * (1 + self.augmented_replicas)
        if self.vectors.ndim != 2 or self.vectors.shape != (expected_rows, self.dim):
            raise InvariantViolation(
                f"vectors shape {self.vectors.shape} != ({expected_rows}, {self.dim})"
            )
        if self.vectors.dtype != np.float32:
            raise InvariantViolation(f"vectors must be float32, got {self.vectors.dtype}")
        if not np.all(np.isfinite(self.vectors)):
            raise InvariantViolation("vectors contain NaN or Inf")
        expected = EXPECTED_DIMS.get(self.backbone_id)
        if expected is not None and expected != self.dim:
            raise DimMismatch(
                f"backbone {self.backbone_id!r} produces dim {expected}, file says {self.dim}"
            )

    def row_index(self, sample_index: int) -> int:
        """Index of the clean row for the sample_index-th sample."""
        return sample_index * (1 + self.augmented_replicas)


def _pack_str(s: str) -> bytes:
    b = s.encode("utf-8")
    if len(b) > 0xFFFF:
        raise InvariantViolation(f"string too long for u16 prefix: {len(b)} bytes")
    return struct.pack("<H", len(b)) + b


def write_embeddings(emb: EmbeddingSet, path: str | Path) -> None:
    emb.validate()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IIII", FORMAT_VERSION, emb.dim, emb.n, emb.augmented_replicas))
        fh.write(_pack_str(emb.backbone_id))
        for sid in emb.sample_ids:
            fh.write(_pack_str(sid))
        payload = np.ascontiguousarray(emb.vectors, dtype="<f4")
        fh.write(payload.tobytes())


class _Cursor:
    def __init__(self, buf: bytes):
        self.buf = buf
        self.off = 0

    def take(self, nbytes: int, what: str) -> bytes:
        end = self.off + nbytes
        if end > len(self.buf):
            raise TruncatedPayload(
                f"{what}: need {nbytes} bytes at offset {self.off}, "
                f"file ends at {len(self.buf)}"
            )
        out = self.buf[self.off:end]
        self.off = end
        return out

    def take_str(self, what: str) -> str:
        (length,) = struct.unpack("<H", self.take(2, f"{what} length"))
        raw = self.take(length, what)
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise EmbeddingFormatError(f"{what}: invalid UTF-8 at offset {self.off - length}") from exc


def read_embeddings(path: str | Path) -> EmbeddingSet:
    """Read a file produced by write_embeddings; bit-exact inverse."""
    with open(path, "rb") as fh:
        buf = fh.read()

    if len(buf) < len(MAGIC) or buf[: len(MAGIC)] != MAGIC:
        raise BadMagic(f"{path}: bad magic {buf[:len(MAGIC)]!r}")
    cur = _Cursor(buf)
    cur.off = len(MAGIC)

    version, dim, n, r = struct.unpack("<IIII", cur.take(16, "header"))
    if version != FORMAT_VERSION:
        raise VersionUnsupported(f"{path}: format version {version}, supported: {FORMAT_VERSION}")

    backbone_id = cur.take_str("backbone_id")
    sample_ids = tuple(cur.take_str(f"sample_id[{i}]") for i in range(n))

    rows = n * (1 + r)
    payload = cur.take(rows * dim * 4, "payload")
    if cur.off != len(buf):
        raise TruncatedPayload(
            f"{path}: {len(buf) - cur.off} trailing bytes after payload (offset {cur.off})"
        )
    vectors = np.frombuffer(payload, dtype="<f4").reshape(rows, dim).copy()

    emb = EmbeddingSet(
        backbone_id=backbone_id,
        dim=dim,
        sample_ids=sample_ids,
        vectors=vectors,
        augmented_replicas=r,
    )
    emb.validate()
    return emb


@dataclass(frozen=True)
class AlignedData:
    """Embedding rows joined to manifest labels, in manifest order.

    ``rows`` holds every stored row (clean + augmented, float64); ``matrix``
    exposes just the clean rows, one per sample. Arrays are read-only.
    """

    sample_ids: tuple[str, ...]
    species: tuple[str, ...]
    labels: np.ndarray  # (n,) uint8, 0 = bona fide, 1 = attack
    rows: np.ndarray  # (n*(1+r), d) float64
    replicas: int

    @property
    def n(self) -> int:
        return len(self.sample_ids)

    @property
    def dim(self) -> int:
        return self.rows.shape[1]

    @property
    def matrix(self) -> np.ndarray:
        return self.rows[:: 1 + self.replicas]

    def training_rows(self) -> tuple[np.ndarray, np.ndarray]:
        """All rows (augmented replicas included) with labels repeated."""
        return self.rows, np.repeat(self.labels, 1 + self.replicas)


def join(manifest: Manifest, emb: EmbeddingSet, partition: str) -> AlignedData:
    """Align embeddings to the manifest's rows for one partition.

    Output order follows the manifest; every requested sample must exist in
    the embedding set or MissingEmbedding is raised.
    """
    index: dict[str, int] = {}
    for i, sid in enumerate(emb.sample_ids):
        index.setdefault(sid, i)

    records = manifest.in_partition(partition)
    stride = 1 + emb.augmented_replicas
    sample_ids = []
    species = []
    labels = np.empty(len(records), dtype=np.uint8)
    rows = np.empty((len(records) * stride, emb.dim), dtype=np.float64)
    for out_i, rec in enumerate(records):
        src = index.get(rec.sample_id)
        if src is None:
            raise MissingEmbedding(rec.sample_id)
        sample_ids.append(rec.sample_id)
        species.append(rec.pai_species)
        labels[out_i] = 0 if rec.label is Label.BONA_FIDE else 1
        rows[out_i * stride:(out_i + 1) * stride] = emb.vectors[src * stride:(src + 1) * stride]

    labels.flags.writeable = False
    rows.flags.writeable = False
    return AlignedData(
        sample_ids=tuple(sample_ids),
        species=tuple(species),
        labels=labels,
        rows=rows,
        replicas=emb.augmented_replicas,
    )
