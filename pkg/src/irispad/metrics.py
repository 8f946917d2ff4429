"""ISO/IEC 30107-3 style error rates over attack scores.

Decision rule: ``score >= tau`` classifies a presentation as an attack
(RES=1), so higher scores mean more attack-like. Under this rule, lowering
tau can only flag more presentations as attacks, hence APCER is
non-increasing and BPCER non-decreasing along decreasing tau.

APCER for a PAI species is the fraction of that species' attacks
misclassified as bona fide; BPCER the fraction of bona fide presentations
misclassified as attacks. Both are computed as exact count ratios
(misses/N), algebraically identical to the 1 - mean(RES) form, so equal
rates compare equal in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IrisPadError, NoAttacks, NoBonaFide, NoSuchSpecies
from .scores import ScoreSet

BPCER_TARGETS = {"bpcer10": 0.10, "bpcer20": 0.05, "bpcer100": 0.01}


@dataclass(frozen=True)
class PaiScope:
    """Which attacks feed the APCER side of a sweep."""

    kind: str  # "pooled" | "worst-case" | "single"
    species: str | None = None

    @classmethod
    def pooled(cls) -> "PaiScope":
        return cls("pooled")

    @classmethod
    def worst_case(cls) -> "PaiScope":
        return cls("worst-case")

    @classmethod
    def single(cls, species: str) -> "PaiScope":
        return cls("single", species)

    @classmethod
    def parse(cls, text: str) -> "PaiScope":
        text = text.strip().lower()
        if text == "pooled":
            return cls.pooled()
        if text in ("worst-case", "worst_case", "worstcase"):
            return cls.worst_case()
        if text.startswith("single:"):
            return cls.single(text.split(":", 1)[1])
        raise ValueError(f"bad pai scope {text!r} (pooled | worst-case | single:<species>)")

    def __str__(self) -> str:
        return self.kind if self.species is None else f"{self.kind}:{self.species}"


def _count_ge(sorted_asc: np.ndarray, taus: np.ndarray) -> np.ndarray:
    """How many elements of sorted_asc are >= each tau."""
    return len(sorted_asc) - np.searchsorted(sorted_asc, taus, side="left")


def apcer(score_set: ScoreSet, tau: float, species: str) -> float:
    """Fraction of the species' attacks classified bona fide at tau."""
    sc = score_set.scores_for_species(species)
    if len(sc) == 0:
        raise NoSuchSpecies(species)
    detected = int(np.count_nonzero(sc >= tau))
    return (len(sc) - detected) / len(sc)


def bpcer(score_set: ScoreSet, tau: float) -> float:
    """Fraction of bona fide presentations classified as attacks at tau."""
    bf = score_set.bona_fide_scores
    if len(bf) == 0:
        raise NoBonaFide("no bona fide entries")
    return int(np.count_nonzero(bf >= tau)) / len(bf)


def worst_case_apcer(score_set: ScoreSet, tau: float) -> tuple[float, str]:
    """Max per-species APCER at tau; ties go to the first species by name."""
    present = score_set.species_present()
    if not present:
        raise NoAttacks("no attack entries")
    best_value, best_species = -1.0, ""
    for sp in present:  # sorted, so first max wins ties lexicographically
        value = apcer(score_set, tau, sp)
        if value > best_value:
            best_value, best_species = value, sp
    return best_value, best_species


# --- threshold sweep ---------------------------------------------------------


def _attack_pools(score_set: ScoreSet, scope: PaiScope) -> list[np.ndarray]:
    """Attack score arrays whose per-pool APCER max defines the scoped APCER."""
    present = score_set.species_present()
    if not present:
        raise NoAttacks("no attack entries")
    if scope.kind == "pooled":
        return [score_set.attack_scores]
    if scope.kind == "worst-case":
        return [score_set.scores_for_species(sp) for sp in present]
    if scope.kind == "single":
        if scope.species not in present:
            raise NoSuchSpecies(scope.species or "")
        return [score_set.scores_for_species(scope.species)]
    raise ValueError(f"unknown scope kind {scope.kind!r}")


def _sweep(score_set: ScoreSet, scope: PaiScope):
    """(taus desc with +/-inf sentinels, apcer, bpcer) arrays for the sweep."""
    bf = score_set.bona_fide_scores
    if len(bf) == 0:
        raise NoBonaFide("no bona fide entries")
    pools = _attack_pools(score_set, scope)

    taus = np.concatenate(([np.inf], np.unique(score_set.scores)[::-1], [-np.inf]))
    apcer_stack = np.empty((len(pools), len(taus)))
    for k, pool in enumerate(pools):
        counts = _count_ge(np.sort(pool), taus)
        apcer_stack[k] = (len(pool) - counts) / len(pool)
    apcer_vals = apcer_stack.max(axis=0)
    bpcer_vals = _count_ge(np.sort(bf), taus) / len(bf)
    return taus, apcer_vals, bpcer_vals


@dataclass(frozen=True)
class DetCurve:
    """APCER/BPCER trade-off, one point per sweep threshold, tau descending."""

    taus: np.ndarray
    apcer: np.ndarray
    bpcer: np.ndarray
    pai_scope: PaiScope

    def __post_init__(self):
        if np.any(np.diff(self.apcer) > 0) or np.any(np.diff(self.bpcer) < 0):
            raise IrisPadError("DET sweep not monotone")

    def __len__(self) -> int:
        return len(self.taus)

    def points(self) -> list[tuple[float, float, float]]:
        return [(float(t), float(a), float(b)) for t, a, b in zip(self.taus, self.apcer, self.bpcer)]


def det_curve(score_set: ScoreSet, scope: PaiScope = PaiScope.pooled()) -> DetCurve:
    taus, a, b = _sweep(score_set, scope)
    return DetCurve(taus=taus, apcer=a, bpcer=b, pai_scope=scope)


def eer(score_set: ScoreSet, scope: PaiScope = PaiScope.pooled()) -> tuple[float, float]:
    """Equal error rate and its threshold.

    Found on the sweep where APCER - BPCER changes sign; exact ties at a
    sweep point are returned as-is, otherwise the two bracketing points are
    linearly interpolated.
    """
    taus, a, b = _sweep(score_set, scope)
    return _eer_from_sweep(taus, a, b)


def _eer_from_sweep(taus, a, b) -> tuple[float, float]:
    d = a - b  # non-increasing along the sweep, from +1 to -1
    idx = int(np.argmax(d <= 0.0))  # first index where the sign has changed
    if d[idx] == 0.0:
        return float(a[idx]), float(taus[idx])
    d1, d2 = d[idx - 1], d[idx]
    t = d1 / (d1 - d2)
    value = (1.0 - t) * a[idx - 1] + t * a[idx]
    if np.isfinite(taus[idx - 1]) and np.isfinite(taus[idx]):
        tau = (1.0 - t) * taus[idx - 1] + t * taus[idx]
    else:
        tau = taus[idx] if np.isfinite(taus[idx]) else taus[idx - 1]
    return float(value), float(tau)


@dataclass(frozen=True)
class OperatingPoint:
    """Achieved (apcer, bpcer) at the chosen threshold; no interpolation."""

    apcer: float
    bpcer: float
    tau: float
    attained: bool

    def to_json_dict(self) -> dict:
        return {"apcer": self.apcer, "bpcer": self.bpcer, "tau": self.tau, "attained": self.attained}


def bpcer_at_apcer(
    score_set: ScoreSet, apcer_target: float, scope: PaiScope = PaiScope.pooled()
) -> OperatingPoint:
    """BPCER at the largest tau whose APCER is <= the target.

    If no sweep threshold reaches the target the point with smallest APCER
    is reported and flagged unattained.
    """
    taus, a, b = _sweep(score_set, scope)
    feasible = np.nonzero(a <= apcer_target)[0]
    if len(feasible):  # apcer is non-increasing, first hit has the largest tau
        i = int(feasible[0])
        return OperatingPoint(apcer=float(a[i]), bpcer=float(b[i]), tau=float(taus[i]), attained=True)
    i = int(np.argmin(a))
    return OperatingPoint(apcer=float(a[i]), bpcer=float(b[i]), tau=float(taus[i]), attained=False)


@dataclass(frozen=True)
class MetricsReport:
    eer: float
    eer_tau: float
    bpcer10: OperatingPoint
    bpcer20: OperatingPoint
    bpcer100: OperatingPoint
    apcer_per_species: dict[str, float]  # at the EER threshold
    n_bona_fide: int
    n_per_species: dict[str, int]
    pai_scope: str

    def __post_init__(self):
        if not (self.bpcer10.bpcer <= self.bpcer20.bpcer <= self.bpcer100.bpcer):
            raise IrisPadError(
                f"operating points out of order: {self.bpcer10.bpcer} / "
                f"{self.bpcer20.bpcer} / {self.bpcer100.bpcer}"
            )

    def to_json_dict(self) -> dict:
        return {
            "pai_scope": self.pai_scope,
            "eer": self.eer,
            "eer_tau": self.eer_tau,
            "bpcer10": self.bpcer10.to_json_dict(),
            "bpcer20": self.bpcer20.to_json_dict(),
            "bpcer100": self.bpcer100.to_json_dict(),
            "apcer_per_species_at_eer_tau": dict(sorted(self.apcer_per_species.items())),
            "n_bona_fide": self.n_bona_fide,
            "n_per_species": dict(sorted(self.n_per_species.items())),
        }

    def to_csv_rows(self) -> list[tuple[str, str]]:
        rows = [
            ("pai_scope", self.pai_scope),
            ("eer", repr(self.eer)),
            ("eer_tau", repr(self.eer_tau)),
        ]
        for name, op in (("bpcer10", self.bpcer10), ("bpcer20", self.bpcer20), ("bpcer100", self.bpcer100)):
            rows += [
                (name, repr(op.bpcer)),
                (f"{name}_apcer", repr(op.apcer)),
                (f"{name}_tau", repr(op.tau)),
                (f"{name}_attained", str(op.attained).lower()),
            ]
        for sp, val in sorted(self.apcer_per_species.items()):
            rows.append((f"apcer_at_eer_tau[{sp}]", repr(val)))
        rows.append(("n_bona_fide", str(self.n_bona_fide)))
        for sp, cnt in sorted(self.n_per_species.items()):
            rows.append((f"n_attacks[{sp}]", str(cnt)))
        return rows

    def render_text(self) -> str:
        pct = lambda v: f"{100.0 * v:.3f}"
        lines = [
            f"pai scope:        {self.pai_scope}",
            f"EER (%):          {pct(self.eer)}  (tau {self.eer_tau:.6g})",
            f"BPCER10 (%):      {pct(self.bpcer10.bpcer)}",
            f"BPCER20 (%):      {pct(self.bpcer20.bpcer)}",
            f"BPCER100 (%):     {pct(self.bpcer100.bpcer)}",
            f"bona fide count:  {self.n_bona_fide:,}",
        ]
        for sp in sorted(self.n_per_species):
            lines.append(
                f"  {sp:<24} n={self.n_per_species[sp]:<7,} "
                f"APCER@eer_tau (%): {pct(self.apcer_per_species[sp])}"
            )
        return "\n".join(lines)


def full_report(score_set: ScoreSet, scope: PaiScope = PaiScope.pooled()) -> MetricsReport:
    eer_value, eer_tau = eer(score_set, scope)
    present = score_set.species_present()
    return MetricsReport(
        eer=eer_value,
        eer_tau=eer_tau,
        bpcer10=bpcer_at_apcer(score_set, BPCER_TARGETS["bpcer10"], scope),
        bpcer20=bpcer_at_apcer(score_set, BPCER_TARGETS["bpcer20"], scope),
        bpcer100=bpcer_at_apcer(score_set, BPCER_TARGETS["bpcer100"], scope),
        apcer_per_species={sp: apcer(score_set, eer_tau, sp) for sp in present},
        n_bona_fide=int(np.count_nonzero(score_set.labels == 0)),
        n_per_species={sp: len(score_set.scores_for_species(sp)) for sp in present},
        pai_scope=str(scope),
    )


def pooled_eer(bf_scores: np.ndarray, attack_scores: np.ndarray) -> float:
    """Array-level pooled EER, used in the training loop's model selection."""
    if len(bf_scores) == 0:
        raise NoBonaFide("no bona fide scores")
    if len(attack_scores) == 0:
        raise NoAttacks("no attack scores")
    taus = np.concatenate(
        ([np.inf], np.unique(np.concatenate((bf_scores, attack_scores)))[::-1], [-np.inf])
    )
    att_sorted = np.sort(attack_scores)
    a = (len(att_sorted) - _count_ge(att_sorted, taus)) / len(att_sorted)
    b = _count_ge(np.sort(bf_scores), taus) / len(bf_scores)
    return _eer_from_sweep(taus, a, b)[0]
