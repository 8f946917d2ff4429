"""Stream writer for the toolkit's binary embedding format.

Layout (little-endian): 8-byte magic ``PADEMB\\x00\\x01``; u32 version (=1),
dim, n, r; u16-length-prefixed UTF-8 backbone_id; n length-prefixed
sample_ids; then n*(1+r) rows of dim float32 values, clean row first and
its r augmented rows after it.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"PADEMB\x00\x01"
FORMAT_VERSION = 1


def _pack_str(s: str) -> bytes:
    raw = s.encode("utf-8")
    if len(raw) > 0xFFFF:
        raise ValueError(f"string too long for u16 prefix: {len(raw)} bytes")
    return struct.pack("<H", len(raw)) + raw


class EmbeddingWriter:
    """Writes the header up front, then rows sample by sample."""

    def __init__(self, path: str | Path, backbone_id: str, dim: int, n: int, replicas: int):
        if dim <= 0 or n <= 0 or replicas < 0:
            raise ValueError(f"bad header fields dim={dim} n={n} r={replicas}")
        self.dim = dim
        self.replicas = replicas
        self.rows_expected = n * (1 + replicas)
        self.rows_written = 0
        self._ids_expected = n
        self._ids_written = 0
        self._fh = open(path, "wb")
        self._fh.write(MAGIC)
        self._fh.write(struct.pack("<IIII", FORMAT_VERSION, dim, n, replicas))
        self._fh.write(_pack_str(backbone_id))

    def write_sample_ids(self, sample_ids) -> None:
        for sid in sample_ids:
            self._fh.write(_pack_str(sid))
            self._ids_written += 1
        if self._ids_written != self._ids_expected:
            raise ValueError(f"wrote {self._ids_written} ids, header says {self._ids_expected}")

    def write_rows(self, rows: np.ndarray) -> None:
        rows = np.ascontiguousarray(rows, dtype="<f4")
        if rows.ndim != 2 or rows.shape[1] != self.dim:
            raise ValueError(f"row block shape {rows.shape}, expected (*, {self.dim})")
        if not np.all(np.isfinite(rows)):
            raise ValueError("non-finite embedding values")
        self.rows_written += len(rows)
        if self.rows_written > self.rows_expected:
            raise ValueError(f"too many rows: {self.rows_written} > {self.rows_expected}")
        self._fh.write(rows.tobytes())

    def close(self) -> None:
        try:
            if self.rows_written != self.rows_expected:
                raise ValueError(
                    f"file incomplete: {self.rows_written} rows written, "
                    f"header says {self.rows_expected}"
                )
        finally:
            self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is None:
            self.close()
        else:
            self._fh.close()
        return False
