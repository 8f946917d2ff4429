import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_score_set
from irispad.errors import DegenerateScores, NoBonaFide, NoSuchSpecies
from irispad.metrics import (
    PaiScope,
    apcer,
    bpcer,
    bpcer_at_apcer,
    det_curve,
    eer,
    full_report,
    worst_case_apcer,
)
from irispad.scores import make_score_set
from oracle import (
    apcer_recount,
    bpcer_at_apcer_recount,
    eer_recount,
    sweep_recount,
    worst_case_recount,
)


def simple_set(bf_scores, attack_scores, species="printed"):
    entries = [(f"b{i}", 0, "none", s) for i, s in enumerate(bf_scores)]
    entries += [(f"a{i}", 1, species, s) for i, s in enumerate(attack_scores)]
    return make_score_set(entries)


def two_species_set():
    entries = [(f"b{i}", 0, "none", s) for i, s in enumerate([0.1, 0.2, 0.3])]
    entries += [(f"p{i}", 1, "printed", s) for i, s in enumerate([0.9, 0.8, 0.2, 0.6])]
    entries += [(f"d{i}", 1, "display", s) for i, s in enumerate([0.4, 0.95])]
    return make_score_set(entries)


# --- apcer / bpcer ------------------------------------------------------------


def test_apcer_hand_count():
    # four printed attacks {0.9, 0.8, 0.2, 0.6} at tau 0.5: RES = 1,1,0,1
    sset = two_species_set()
    assert apcer(sset, 0.5, "printed") == 0.25


def test_apcer_extremes():
    sset = simple_set([0.1], [0.7, 0.8])
    assert apcer(sset, 0.5, "printed") == 0.0
    assert apcer(sset, 0.99, "printed") == 1.0
    for tau in (0.5, 0.7, 0.75, 0.99):
        assert apcer(sset, tau, "printed") == apcer_recount(sset, tau, "printed")


def test_apcer_unknown_species():
    with pytest.raises(NoSuchSpecies):
        apcer(two_species_set(), 0.5, "cadaver")


def test_bpcer_hand_count():
    sset = simple_set([0.1, 0.2, 0.7], [0.9])
    assert bpcer(sset, 0.5) == pytest.approx(1 / 3, abs=0)
    assert bpcer(sset, 0.8) == 0.0
    assert bpcer(sset, -np.inf) == 1.0


def test_bpcer_requires_bona_fide():
    entries = [("a0", 1, "printed", 0.5)]
    with pytest.raises(NoBonaFide):
        bpcer(make_score_set(entries), 0.5)


def test_worst_case_apcer():
    sset = two_species_set()
    # at tau 0.5: printed misses 1/4, display misses 1/2
    value, species = worst_case_apcer(sset, 0.5)
    assert (value, species) == (0.5, "display")
    # single species equals plain apcer
    single = simple_set([0.1], [0.6, 0.2])
    assert worst_case_apcer(single, 0.5) == (apcer(single, 0.5, "printed"), "printed")


def test_worst_case_tie_breaks_lexicographically():
    entries = [("b0", 0, "none", 0.1)]
    entries += [("p0", 1, "printed", 0.2), ("d0", 1, "display", 0.3)]
    sset = make_score_set(entries)
    value, species = worst_case_apcer(sset, 0.9)  # both species at APCER 1.0
    assert value == 1.0
    assert species == "display"


def test_worst_case_matches_bruteforce_random():
    rng = np.random.default_rng(21)
    for _ in range(50):
        sset = random_score_set(rng, max_entries=60)
        tau = float(rng.random())
        assert worst_case_apcer(sset, tau) == worst_case_recount(sset, tau)


# --- det curve -----------------------------------------------------------------


def test_det_perfectly_separated_hits_origin():
    curve = det_curve(simple_set([0.1, 0.2], [0.8, 0.9]))
    assert (0.0, 0.0) in {(a, b) for _, a, b in curve.points()}


def test_det_all_equal_scores_only_corners():
    curve = det_curve(simple_set([0.5, 0.5], [0.5, 0.5]))
    assert {(a, b) for _, a, b in curve.points()} == {(1.0, 0.0), (0.0, 1.0)}


def test_det_monotone_and_matches_recount():
    rng = np.random.default_rng(22)
    sset = random_score_set(rng, max_entries=50)
    curve = det_curve(sset)
    taus, a, b = sweep_recount(sset)
    np.testing.assert_array_equal(curve.taus, taus)
    np.testing.assert_array_equal(curve.apcer, a)
    np.testing.assert_array_equal(curve.bpcer, b)
    assert np.all(np.diff(curve.apcer) <= 0)
    assert np.all(np.diff(curve.bpcer) >= 0)


def test_det_requires_both_classes():
    with pytest.raises(DegenerateScores):
        det_curve(make_score_set([("b0", 0, "none", 0.5)]))


# --- eer -------------------------------------------------------------------------


def test_eer_hand_fixture():
    # exhaustive sweep by hand: APCER = BPCER = 1/3 between 0.3 and 0.7
    sset = simple_set([0.1, 0.2, 0.7], [0.3, 0.8, 0.9])
    value, tau = eer(sset)
    assert abs(value - 1 / 3) <= 1e-12
    assert 0.3 < tau <= 0.7


def test_eer_separated_is_zero():
    value, _ = eer(simple_set([0.1, 0.2], [0.8, 0.9]))
    assert value == 0.0


def test_eer_anticlassifier_is_one():
    value, _ = eer(simple_set([0.8, 0.9], [0.1, 0.2]))
    assert value == 1.0


def test_eer_all_equal_is_half():
    value, _ = eer(simple_set([0.5, 0.5], [0.5, 0.5]))
    assert value == 0.5


def test_eer_matches_recount_random():
    rng = np.random.default_rng(23)
    for _ in range(100):
        sset = random_score_set(rng, max_entries=80)
        for scope_kind in ("pooled", "worst-case"):
            scope = PaiScope.pooled() if scope_kind == "pooled" else PaiScope.worst_case()
            got_v, got_t = eer(sset, scope)
            exp_v, exp_t = eer_recount(sset, scope_kind)
            assert abs(got_v - exp_v) <= 1e-12
            assert got_t == exp_t


# --- operating points --------------------------------------------------------------


def test_operating_points_separated_all_zero():
    sset = simple_set([0.1, 0.2], [0.8, 0.9])
    for target in (0.10, 0.05, 0.01):
        op = bpcer_at_apcer(sset, target)
        assert op.bpcer == 0.0 and op.attained


def test_operating_point_ordering_documented_shape():
    # a well-performing evaluation row keeps the shape b10 <= b20 <= b100,
    # e.g. (EER 6.775, 3.860, 10.828, 31.732) percent
    assert 3.860 <= 10.828 <= 31.732


def test_operating_points_match_bruteforce_random():
    rng = np.random.default_rng(24)
    for _ in range(60):
        sset = random_score_set(rng, max_entries=200)
        for target in (0.10, 0.05, 0.01):
            op = bpcer_at_apcer(sset, target)
            exp_a, exp_b, exp_tau, exp_att = bpcer_at_apcer_recount(sset, target)
            assert (op.apcer, op.bpcer, op.tau, op.attained) == (exp_a, exp_b, exp_tau, exp_att)


# --- full report ---------------------------------------------------------------------


def test_full_report_separated_zeros():
    report = full_report(simple_set([0.1, 0.2], [0.8, 0.9]))
    assert report.eer == 0.0
    assert report.bpcer10.bpcer == report.bpcer20.bpcer == report.bpcer100.bpcer == 0.0
    assert report.apcer_per_species == {"printed": 0.0}


def test_full_report_single_species_equals_pooled():
    sset = simple_set([0.1, 0.6, 0.2], [0.5, 0.8, 0.3])
    report = full_report(sset)
    assert list(report.apcer_per_species) == ["printed"]
    assert report.apcer_per_species["printed"] == apcer(sset, report.eer_tau, "printed")
    assert report.n_per_species == {"printed": 3}
    assert report.n_bona_fide == 3


def test_full_report_ordering_invariant_random():
    rng = np.random.default_rng(25)
    for _ in range(40):
        report = full_report(random_score_set(rng, max_entries=120))
        assert report.bpcer10.bpcer <= report.bpcer20.bpcer <= report.bpcer100.bpcer


# --- invariants (hypothesis) ------------------------------------------------------


@st.composite
def score_sets(draw):
    seed = draw(st.integers(min_value=0, max_value=2**31 - 1))
    return random_score_set(np.random.default_rng(seed), max_entries=60)


@settings(max_examples=60, deadline=None)
@given(score_sets())
def test_eer_symmetry_under_inversion(sset):
    flipped = make_score_set(
        [
            (sid, 1 - lab, "printed" if lab == 0 else "none", 1.0 - sc)
            for sid, lab, sc in zip(sset.sample_ids, sset.labels, sset.scores)
        ]
    )
    v1, _ = eer(sset)
    v2, _ = eer(flipped)
    assert abs(v1 - v2) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(score_sets())
def test_monotone_transform_leaves_metrics(sset):
    cubed = sset.with_scores(sset.scores**3)
    r1 = full_report(sset)
    r2 = full_report(cubed)
    assert r1.eer == r2.eer
    for name in ("bpcer10", "bpcer20", "bpcer100"):
        assert getattr(r1, name).bpcer == getattr(r2, name).bpcer
        assert getattr(r1, name).apcer == getattr(r2, name).apcer
    assert r1.apcer_per_species == r2.apcer_per_species


@settings(max_examples=60, deadline=None)
@given(score_sets())
def test_det_monotonicity_property(sset):
    curve = det_curve(sset, PaiScope.worst_case())
    assert np.all(np.diff(curve.apcer) <= 0)
    assert np.all(np.diff(curve.bpcer) >= 0)
    assert 0.0 <= eer(sset)[0] <= 1.0
