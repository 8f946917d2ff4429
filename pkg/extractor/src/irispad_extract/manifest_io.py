"""Reader for the toolkit's manifest CSV interchange format.

Only the columns the extractor needs are interpreted (sample_id and
source_path); the full documented header is still required so malformed
files fail fast. source_path is resolved relative to the manifest's
directory when not absolute.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .errors import ManifestFormatError

MANIFEST_COLUMNS = ("sample_id", "label", "pai_species", "partition", "sensor", "source_path")


@dataclass(frozen=True)
class ManifestEntry:
    sample_id: str
    source_path: Path


def read_manifest(path: str | Path) -> list[ManifestEntry]:
    base = Path(path).parent
    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != MANIFEST_COLUMNS:
            raise ManifestFormatError(
                f"{path}: bad header {reader.fieldnames!r}, expected {','.join(MANIFEST_COLUMNS)}"
            )
        for row in reader:
            sid = (row["sample_id"] or "").strip()
            src = (row["source_path"] or "").strip()
            if not sid or not src:
                raise ManifestFormatError(f"{path} line {reader.line_num}: empty sample_id or source_path")
            if sid in seen:
                raise ManifestFormatError(f"{path} line {reader.line_num}: duplicate sample_id {sid!r}")
            seen.add(sid)
            src_path = Path(src)
            entries.append(ManifestEntry(sid, src_path if src_path.is_absolute() else base / src_path))
    if not entries:
        raise ManifestFormatError(f"{path}: no rows")
    return entries
