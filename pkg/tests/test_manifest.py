import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from irispad.errors import DuplicateId, EmptyManifest, MalformedRow
from irispad.manifest import (
    Label,
    Manifest,
    SampleRecord,
    parse_manifest,
    serialize_manifest,
    summarize,
)

HEADER = "sample_id,label,pai_species,partition,sensor,source_path"


def write(tmp_path, text, name="m.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_parse_small_manifest(tmp_path):
    path = write(
        tmp_path,
        HEADER + "\n"
        "a,bona_fide,none,train,lg4000,img/a.png\n"
        "b,bona_fide,none,train,lg4000,img/b.png\n"
        "c,attack,printed,train,icam,img/c.png\n"
        "d,attack,printed,train,icam,img/d.png\n",
    )
    manifest = parse_manifest(path)
    assert len(manifest) == 4
    assert [r.sample_id for r in manifest.records] == ["a", "b", "c", "d"]
    counts = manifest.counts()
    assert counts[(Label.BONA_FIDE, "none", "train")] == 2
    assert counts[(Label.ATTACK, "printed", "train")] == 2


def test_duplicate_id_rejected(tmp_path):
    path = write(
        tmp_path,
        HEADER + "\n"
        "a,bona_fide,none,train,s,p\n"
        "a,attack,printed,val,s,p\n",
    )
    with pytest.raises(DuplicateId) as exc:
        parse_manifest(path)
    assert exc.value.sample_id == "a"
    assert exc.value.line_no == 3


def test_empty_manifest(tmp_path):
    with pytest.raises(EmptyManifest):
        parse_manifest(write(tmp_path, HEADER + "\n"))
    with pytest.raises(EmptyManifest):
        parse_manifest(write(tmp_path, "", name="e.csv"))


@pytest.mark.parametrize(
    "row,fragment",
    [
        ("a,real,none,train,s,p", "bad label"),
        ("a,bona_fide,none,weekend,s,p", "bad partition"),
        ("a,bona_fide,printed,train,s,p", "bona fide row with pai_species"),
        ("a,attack,none,train,s,p", "attack row without pai_species"),
        ("a,attack,,train,s,p", "attack row without pai_species"),
        (",bona_fide,none,train,s,p", "empty sample_id"),
        ("a,bona_fide,none,train,s", "missing field"),
    ],
)
def test_malformed_rows(tmp_path, row, fragment):
    path = write(tmp_path, HEADER + "\n" + row + "\n")
    with pytest.raises(MalformedRow) as exc:
        parse_manifest(path)
    assert exc.value.line_no == 2
    assert fragment in str(exc.value)


def test_bad_header(tmp_path):
    path = write(tmp_path, "id,label\nx,bona_fide\n")
    with pytest.raises(MalformedRow) as exc:
        parse_manifest(path)
    assert exc.value.line_no == 1


def test_unknown_species_kept_verbatim(tmp_path):
    path = write(tmp_path, HEADER + "\na,attack,doll eye v2,test,s,p\n")
    manifest = parse_manifest(path)
    assert manifest.records[0].pai_species == "doll eye v2"


def test_canonical_species_case_insensitive(tmp_path):
    path = write(tmp_path, HEADER + "\na,attack,PRINTED,test,s,p\n")
    assert parse_manifest(path).records[0].pai_species == "printed"


def test_table_shaped_totals(table_manifest_path):
    manifest = parse_manifest(table_manifest_path)
    sizes = manifest.partition_sizes()
    assert sizes == {"train": 11810, "val": 4384, "test": 11770}
    assert len(manifest) == 27964


def test_summarize_single_record():
    manifest = Manifest(
        records=(SampleRecord("a", Label.BONA_FIDE, "none", "train", "s", "p"),)
    )
    summary = summarize(manifest)
    assert summary.total == 1
    assert summary.cells[(Label.BONA_FIDE, "none")] == {"train": 1, "val": 0, "test": 0}


def test_summarize_table_bona_fide_row(table_manifest):
    summary = summarize(table_manifest)
    assert summary.cells[(Label.BONA_FIDE, "none")] == {
        "train": 6694,
        "val": 1062,
        "test": 5773,
    }
    assert summary.total == 27964


def test_summarize_marginals_match_recount(table_manifest):
    summary = summarize(table_manifest)
    assert sum(summary.partition_totals.values()) == len(table_manifest)
    for partition in ("train", "val", "test"):
        per_cell = sum(per_part[partition] for per_part in summary.cells.values())
        assert per_cell == summary.partition_totals[partition]


def test_summarize_random_manifest_matches_independent_tally():
    rng = np.random.default_rng(3)
    species = ["none", "printed", "cadaver", "display"]
    records = []
    for i in range(100):
        sp = species[rng.integers(0, len(species))]
        label = Label.BONA_FIDE if sp == "none" else Label.ATTACK
        records.append(
            SampleRecord(f"r{i}", label, sp, ("train", "val", "test")[rng.integers(0, 3)], "s", "p")
        )
    manifest = Manifest(records=tuple(records))
    summary = summarize(manifest)

    # second pass, independent tally
    recount = {}
    for r in records:
        key = (r.label, r.pai_species)
        recount.setdefault(key, {"train": 0, "val": 0, "test": 0})
        recount[key][r.partition] += 1
    assert dict(summary.cells) == recount


_field = st.text(
    alphabet="abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-./ ",
    min_size=1,
    max_size=12,
).map(str.strip).filter(bool)
# species strings that survive parsing unchanged: canonical names or clearly
# non-canonical ones (no case-variants of canonical names)
_attack_species = st.one_of(
    st.sampled_from(["printed", "cadaver", "display", "prosthetic", "contact_lens_textured"]),
    st.sampled_from(["doll eye", "gummy_2024", "synthetic-q3"]),
)


@st.composite
def manifests(draw):
    n = draw(st.integers(min_value=1, max_value=25))
    records = []
    for i in range(n):
        is_attack = draw(st.booleans())
        records.append(
            SampleRecord(
                sample_id=f"id{i}-" + draw(_field),
                label=Label.ATTACK if is_attack else Label.BONA_FIDE,
                pai_species=draw(_attack_species) if is_attack else "none",
                partition=draw(st.sampled_from(["train", "val", "test"])),
                sensor=draw(_field),
                source_path=draw(_field),
            )
        )
    return Manifest(records=tuple(records))


@settings(max_examples=50, deadline=None)
@given(manifest=manifests())
def test_roundtrip_and_count_sum(manifest, tmp_path_factory):
    path = tmp_path_factory.mktemp("rt") / "m.csv"
    serialize_manifest(manifest, path)
    assert parse_manifest(path) == manifest
    assert sum(manifest.counts().values()) == len(manifest)
