"""Dataset manifest ingestion and summary bookkeeping.

A manifest is a UTF-8 CSV with header
``sample_id,label,pai_species,partition,sensor,source_path`` describing one
capture per row: whether it is bona fide or an attack, which attack
instrument (PAI) produced it, which split it belongs to, and where the image
lives on disk. Parsed manifests are immutable and safe to share across
threads; all counts are recomputed from the records on demand.
"""

from __future__ import annotations

import csv
import enum
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .errors import DuplicateId, EmptyManifest, MalformedRow

MANIFEST_COLUMNS = ("sample_id", "label", "pai_species", "partition", "sensor", "source_path")

PARTITIONS = ("train", "val", "test")

# Species string used for bona fide rows (no attack instrument involved).
NO_SPECIES = "none"

# Known attack instrument names; anything else is accepted verbatim so new
# instrument types ingest without a schema change.
CANONICAL_SPECIES = frozenset(
    {"cadaver", "contact_lens_textured", "printed", "prosthetic", "display"}
)


class Label(enum.Enum):
    BONA_FIDE = "bona_fide"
    ATTACK = "attack"


@dataclass(frozen=True)
class SampleRecord:
    sample_id: str
    label: Label
    pai_species: str
    partition: str
    sensor: str
    source_path: str


@dataclass(frozen=True)
class Manifest:
    records: tuple[SampleRecord, ...]

    def __len__(self) -> int:
        return len(self.records)

    def counts(self) -> Counter:
        """Tally per (label, pai_species, partition), derived from records."""
        return Counter((r.label, r.pai_species, r.partition) for r in self.records)

    def partition_sizes(self) -> dict[str, int]:
        sizes = {p: 0 for p in PARTITIONS}
        for r in self.records:
            sizes[r.partition] += 1
        return sizes

    def in_partition(self, partition: str) -> tuple[SampleRecord, ...]:
        return tuple(r for r in self.records if r.partition == partition)


def _parse_row(row: dict, line_no: int) -> SampleRecord:
    for col in MANIFEST_COLUMNS:
        if row.get(col) is None:
            raise MalformedRow(line_no, f"missing field {col!r}")
    if row.get(None) is not None:
        raise MalformedRow(line_no, "too many fields")

    sample_id = row["sample_id"].strip()
    if not sample_id:
        raise MalformedRow(line_no, "empty sample_id")

    label_raw = row["label"].strip().lower()
    try:
        label = Label(label_raw)
    except ValueError:
        raise MalformedRow(line_no, f"bad label {row['label']!r}") from None

    partition = row["partition"].strip().lower()
    if partition not in PARTITIONS:
        raise MalformedRow(line_no, f"bad partition {row['partition']!r}")

    species = row["pai_species"].strip()
    species = species.lower() if species.lower() in CANONICAL_SPECIES | {NO_SPECIES} else species
    if species == "":
        species = NO_SPECIES
    if label is Label.BONA_FIDE and species != NO_SPECIES:
        raise MalformedRow(line_no, f"bona fide row with pai_species {species!r}")
    if label is Label.ATTACK and species == NO_SPECIES:
        raise MalformedRow(line_no, "attack row without pai_species")

    return SampleRecord(
        sample_id=sample_id,
        label=label,
        pai_species=species,
        partition=partition,
        sensor=row["sensor"].strip(),
        source_path=row["source_path"].strip(),
    )


def parse_manifest(path: str | Path) -> Manifest:
    """Parse and validate a manifest CSV, preserving row order.

    Raises MalformedRow / DuplicateId with 1-based line numbers, or
    EmptyManifest when no data rows are present.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise EmptyManifest(f"{path}: no header row")
        if tuple(reader.fieldnames) != MANIFEST_COLUMNS:
            raise MalformedRow(1, f"bad header {reader.fieldnames!r}, expected {','.join(MANIFEST_COLUMNS)}")

        records: list[SampleRecord] = []
        seen: dict[str, int] = {}
        for row in reader:
            line_no = reader.line_num
            rec = _parse_row(row, line_no)
            if rec.sample_id in seen:
                raise DuplicateId(rec.sample_id, line_no)
            seen[rec.sample_id] = line_no
            records.append(rec)

    if not records:
        raise EmptyManifest(f"{path}: header but no rows")
    return Manifest(records=tuple(records))


def serialize_manifest(manifest: Manifest, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(MANIFEST_COLUMNS)
        for r in manifest.records:
            writer.writerow(
                [r.sample_id, r.label.value, r.pai_species, r.partition, r.sensor, r.source_path]
            )


@dataclass(frozen=True)
class ManifestSummary:
    """Counts per (label, pai_species) row and per partition column."""

    cells: dict  # (Label, species) -> {partition: count}
    partition_totals: dict[str, int]
    total: int

    def to_json_dict(self) -> dict:
        rows = []
        for (label, species), per_part in self.cells.items():
            rows.append(
                {
                    "label": label.value,
                    "pai_species": species,
                    **{p: per_part[p] for p in PARTITIONS},
                    "total": sum(per_part.values()),
                }
            )
        return {
            "rows": rows,
            "partition_totals": dict(self.partition_totals),
            "total": self.total,
        }

    def render_text(self) -> str:
        lines = [f"{'class':<12} {'pai_species':<24} {'train':>10} {'val':>10} {'test':>10} {'total':>10}"]
        for (label, species), per_part in self.cells.items():
            row_total = sum(per_part.values())
            lines.append(
                f"{label.value:<12} {species:<24} "
                f"{per_part['train']:>10,} {per_part['val']:>10,} {per_part['test']:>10,} {row_total:>10,}"
            )
        t = self.partition_totals
        lines.append(
            f"{'total':<12} {'':<24} {t['train']:>10,} {t['val']:>10,} {t['test']:>10,} {self.total:>10,}"
        )
        return "\n".join(lines)


def summarize(manifest: Manifest) -> ManifestSummary:
    """Aggregate counts; marginal sums always equal the record count."""
    if not manifest.records:
        raise EmptyManifest("cannot summarize an empty manifest")
    cells: dict = {}
    for r in manifest.records:
        key = (r.label, r.pai_species)
        if key not in cells:
            cells[key] = {p: 0 for p in PARTITIONS}
        cells[key][r.partition] += 1
    # bona fide rows first, then attack species alphabetically
    ordered = dict(sorted(cells.items(), key=lambda kv: (kv[0][0] is not Label.BONA_FIDE, kv[0][1])))
    return ManifestSummary(
        cells=ordered,
        partition_totals=manifest.partition_sizes(),
        total=len(manifest.records),
    )
