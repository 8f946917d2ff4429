import numpy as np
import pytest

from irispad.embeddings import join
from irispad.manifest import Label, Manifest, SampleRecord, serialize_manifest
from irispad.scores import ScoreSet, make_score_set
from irispad.synthetic import make_blob_dataset

BLOB_SEED = 20240117

# Table-style dataset shape: (label, species, per-partition counts, sensor).
# Partition totals are pinned to 11,810 / 4,384 / 11,770 (27,964 images) with
# the standard bona fide row; the aggregate printed/prosthetic/display row
# absorbs the remaining attack counts and is split round-robin across its
# three species.
TABLE_ROWS = [
    (Label.BONA_FIDE, ("none",), {"train": 6694, "val": 1062, "test": 5773}, "LG4000"),
    (Label.ATTACK, ("cadaver",), {"train": 448, "val": 531, "test": 754}, "IriTech IriShield"),
    (Label.ATTACK, ("contact_lens_textured",), {"train": 3583, "val": 900, "test": 3244}, "iCam 700"),
    (
        Label.ATTACK,
        ("printed", "prosthetic", "display"),
        {"train": 1085, "val": 1891, "test": 1999},
        "Iris ID iCAM700",
    ),
]


def build_table_manifest() -> Manifest:
    records = []
    uid = 0
    for label, species_cycle, per_part, sensor in TABLE_ROWS:
        for partition, count in per_part.items():
            for i in range(count):
                records.append(
                    SampleRecord(
                        sample_id=f"s{uid:06d}",
                        label=label,
                        pai_species=species_cycle[i % len(species_cycle)],
                        partition=partition,
                        sensor=sensor,
                        source_path=f"images/s{uid:06d}.png",
                    )
                )
                uid += 1
    return Manifest(records=tuple(records))


@pytest.fixture(scope="session")
def table_manifest():
    return build_table_manifest()


@pytest.fixture(scope="session")
def table_manifest_path(table_manifest, tmp_path_factory):
    path = tmp_path_factory.mktemp("table") / "manifest.csv"
    serialize_manifest(table_manifest, path)
    return path


@pytest.fixture(scope="session")
def blob_data():
    manifest, emb = make_blob_dataset(seed=BLOB_SEED)
    return manifest, emb


@pytest.fixture(scope="session")
def blob_splits(blob_data):
    manifest, emb = blob_data
    return tuple(join(manifest, emb, p) for p in ("train", "val", "test"))


SPECIES_POOL = ("cadaver", "contact_lens_textured", "display", "printed")


def random_score_set(rng: np.random.Generator, max_entries: int = 300, max_species: int = 4) -> ScoreSet:
    """Random set with >=1 entry per class; scores often quantized to force ties."""
    n_bf = int(rng.integers(1, max(2, max_entries // 2)))
    n_att = int(rng.integers(1, max(2, max_entries - n_bf)))
    species_pool = SPECIES_POOL[: int(rng.integers(1, max_species + 1))]

    scores = rng.random(n_bf + n_att)
    if rng.random() < 0.5:
        levels = int(rng.choice([2, 3, 5, 10]))
        scores = np.round(scores * (levels - 1)) / (levels - 1)

    entries = []
    for i in range(n_bf):
        entries.append((f"bf{i}", 0, "none", scores[i]))
    for i in range(n_att):
        sp = species_pool[int(rng.integers(0, len(species_pool)))]
        entries.append((f"at{i}", 1, sp, scores[n_bf + i]))
    return make_score_set(entries)
