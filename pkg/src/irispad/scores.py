"""Per-sample attack scores paired with ground truth.

Higher score = more attack-like. A ScoreSet is the interchange unit between
training and evaluation; on disk it is a CSV with header
``sample_id,label,pai_species,score``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ScoreSetError
from .manifest import Label, NO_SPECIES


@dataclass(frozen=True)
class ScoreSet:
    sample_ids: tuple[str, ...]
    labels: np.ndarray  # (n,) uint8, 0 = bona fide, 1 = attack
    species: tuple[str, ...]
    scores: np.ndarray  # (n,) float64 in [0, 1]

    def __post_init__(self):
        n = len(self.sample_ids)
        if not (len(self.labels) == len(self.species) == len(self.scores) == n):
            raise ScoreSetError("field lengths disagree")
        if n and not np.all(np.isfinite(self.scores)):
            raise ScoreSetError("scores contain NaN or Inf")
        if n and (self.scores.min() < 0.0 or self.scores.max() > 1.0):
            raise ScoreSetError("scores outside [0, 1]")
        for lab, sp in zip(self.labels, self.species):
            if (lab == 0) != (sp == NO_SPECIES):
                raise ScoreSetError(
                    f"label/species mismatch: label={lab} pai_species={sp!r}"
                )

    def __len__(self) -> int:
        return len(self.sample_ids)

    @property
    def bona_fide_scores(self) -> np.ndarray:
        return self.scores[self.labels == 0]

    @property
    def attack_scores(self) -> np.ndarray:
        return self.scores[self.labels == 1]

    def species_present(self) -> tuple[str, ...]:
        """Attack species with at least one entry, sorted."""
        return tuple(sorted({sp for lab, sp in zip(self.labels, self.species) if lab == 1}))

    def scores_for_species(self, species: str) -> np.ndarray:
        mask = np.fromiter(
            (lab == 1 and sp == species for lab, sp in zip(self.labels, self.species)),
            dtype=bool,
            count=len(self),
        )
        return self.scores[mask]

    def with_scores(self, scores: np.ndarray) -> "ScoreSet":
        return ScoreSet(self.sample_ids, self.labels, self.species, np.asarray(scores, dtype=np.float64))


def make_score_set(entries) -> ScoreSet:
    """Build a ScoreSet from (sample_id, label, species, score) tuples.

    label may be a manifest Label or the 0/1 convention.
    """
    ids, labels, species, scores = [], [], [], []
    for sid, lab, sp, sc in entries:
        if isinstance(lab, Label):
            lab = 0 if lab is Label.BONA_FIDE else 1
        ids.append(sid)
        labels.append(int(lab))
        species.append(sp)
        scores.append(float(sc))
    return ScoreSet(
        sample_ids=tuple(ids),
        labels=np.asarray(labels, dtype=np.uint8),
        species=tuple(species),
        scores=np.asarray(scores, dtype=np.float64),
    )


def save_scores(scores: ScoreSet, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample_id", "label", "pai_species", "score"])
        for sid, lab, sp, sc in zip(scores.sample_ids, scores.labels, scores.species, scores.scores):
            label_str = Label.BONA_FIDE.value if lab == 0 else Label.ATTACK.value
            writer.writerow([sid, label_str, sp, repr(float(sc))])


def load_scores(path: str | Path) -> ScoreSet:
    entries = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        expected = ["sample_id", "label", "pai_species", "score"]
        if reader.fieldnames != expected:
            raise ScoreSetError(f"{path}: bad header {reader.fieldnames!r}, expected {expected}")
        for row in reader:
            try:
                label = Label(row["label"].strip().lower())
                score = float(row["score"])
            except (ValueError, AttributeError, KeyError) as exc:
                raise ScoreSetError(f"{path} line {reader.line_num}: {exc}") from None
            entries.append((row["sample_id"], label, row["pai_species"].strip(), score))
    if not entries:
        raise ScoreSetError(f"{path}: no score rows")
    return make_score_set(entries)
