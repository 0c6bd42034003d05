import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from srbtimes.classify import (Label, alpha_profile, beta_profile, candidate_times,
                               classify_point, classify_points, complement_defect_from_sequence,
                               decide, refine_report, srb_candidate_measure, summarize)
from srbtimes.dynsys import make_system
from srbtimes.exceptions import EmptyTimeSet, IncompleteInput, NoHyperbolicTime
from srbtimes.timesets import TimeSet, interval_refine

SMALL = dict(deltas=(0.01, 0.1), ms=(10, 100), n=4000, burn_in=100)


class TestDecide:
    def test_hyperbolic_basin(self):
        assert decide({1: 0.995}, {1: 0.0, 2: 0.5}, 1) == Label("HyperbolicBasin", 1)

    def test_falls_back_to_zero(self):
        assert decide({1: 0.5}, {1: 0.4, 2: 0.5}, 1) == Label("HyperbolicBasin", 0)

    def test_non_hyperbolic(self):
        assert decide({1: 0.0}, {1: 0.0, 2: 0.0}, 1) == Label("NonHyperbolicComponent", 0)

    def test_undetermined_band(self):
        assert decide({}, {1: 0.05}, 0) == Label("Undetermined", 0)

    def test_largest_index_wins(self):
        label = decide({1: 1.0, 2: 1.0}, {1: 0, 2: 0, 3: 0.2}, 2)
        assert label == Label("HyperbolicBasin", 2)

    def test_missing(self):
        with pytest.raises(IncompleteInput, match="beta\\[2\\]"):
            decide({1: 1.0}, {1: 0.0}, 1)


@pytest.mark.parametrize("text", ["HyperbolicBasin(0)", "NonHyperbolicComponent(3)", "Undetermined"])
def test_label_round_trip(text):
    assert str(Label.parse(text)) == text


@pytest.fixture(scope="module")
def profiles():
    s = make_system("catns")
    x0 = np.array([0.21, 0.63, 0.4])
    return (alpha_profile(s, x0, 1, (0.005, 0.03, 0.1), (10, 100), 3000),
            beta_profile(s, x0, 2, (0.005, 0.03, 0.1), (10, 100), 3000))


class TestProfiles:
    def test_range(self, profiles):
        for p in profiles:
            assert np.all((p.table >= 0) & (p.table <= 1))
            assert np.all((p.curves >= 0) & (p.curves <= 1))

    def test_alpha_monotone(self, profiles):
        t = profiles[0].table
        assert np.all(np.diff(t, axis=1) >= 0)
        assert np.all(np.diff(t, axis=0) <= 0)

    def test_summary_is_max(self, profiles):
        assert profiles[0].summary() == profiles[0].table.max()

    def test_catrot_center_zero(self):
        s = make_system("catrot")
        x0 = [0.1, 0.2, 0.3]
        assert np.all(alpha_profile(s, x0, 1, n=2000, ms=(10, 100)).table == 0)
        assert np.all(beta_profile(s, x0, 1, n=2000, ms=(10, 100)).table == 0)

    def test_bad_grid(self):
        with pytest.raises(ValueError):
            alpha_profile(make_system("catns"), [0.1, 0.2, 0.3], 1, deltas=(0.1, 0.01))


class TestCandidate:
    def test_catrot_empty(self):
        s = make_system("catrot")
        with pytest.raises(EmptyTimeSet):
            srb_candidate_measure(s, [0.1, 0.2, 0.3], 1, n=3000)

    def test_lin4_refinement(self):
        s = make_system("lin4")
        x0 = np.random.default_rng(0).random(4)
        cand, anchors = candidate_times(s, x0, 1, 0.03, 100, 100, 100, 3000)
        assert len(cand) > 0
        assert np.all((cand.times >= 1) & (cand.times < 3000))
        rep = refine_report(cand, anchors, 100, 100, 100, 3000)
        lo = anchors.times.min()
        assert list(rep.refined) == [t for t in cand if lo < t <= anchors.times.max()]
        assert rep.discarded <= rep.certified_bound

    def test_index_range(self):
        with pytest.raises(ValueError):
            candidate_times(make_system("cat2"), [0.1, 0.2], 1, 0.03, 10, 10, 10, 100)


@given(st.integers(0, 10_000))
def test_refinement_certified_bound(seed):
    rng = np.random.default_rng(seed)
    n, P = int(rng.integers(20, 300)), int(rng.integers(1, 15))
    anchors = TimeSet(np.flatnonzero(rng.random(n) < rng.uniform(0.01, 0.3)), n)
    near = np.zeros(n, dtype=bool)
    for a in anchors:
        near[max(0, a - P):a + 1] = True
    cand = TimeSet(np.flatnonzero(near & (rng.random(n) < 0.7)), n)
    rep = refine_report(cand, anchors, 50, 50, P, n)
    assert rep.refined == interval_refine(cand, anchors)
    assert rep.discarded <= rep.certified_bound + 1e-12


class TestComplementDefect:
    def test_constant_sequence(self):
        # every time is hyperbolic, the chain covers [1, n'), only time 0 is left
        defect, top = complement_defect_from_sequence(np.full(101, 0.5), 0.1, 5, 100)
        assert top == 100
        assert defect == pytest.approx(abs(0.5 - 0.1) / 100 - 0.5 / 5)
        assert defect <= 0

    def test_no_time(self):
        with pytest.raises(NoHyperbolicTime):
            complement_defect_from_sequence(-np.ones(50), 0.1, 5, 40)


def test_classify_point_record():
    s = make_system("cat2")
    rec = classify_point(s, [0.123, 0.456], **SMALL)
    assert rec.label == Label("HyperbolicBasin", 0)
    assert rec.exponents[0] == pytest.approx(math.log((3 + math.sqrt(5)) / 2))
    assert rec.relabel() == rec.label
    assert 0 <= rec.distances["empirical"] < 0.05
    assert set(rec.diagnostics) == {"discarded", "stated_bound", "certified_bound",
                                    "complement_defect"}


def test_classify_points_order_and_batches():
    s = make_system("catrot")
    pts = np.random.default_rng(3).random((3, 3))
    a = classify_points(s, pts, batch_size=2, **SMALL)
    b = [classify_point(s, p, seed_index=j, seed=j, **SMALL) for j, p in enumerate(pts)]
    assert [r.seed_index for r in a] == [0, 1, 2]
    for x, y in zip(a, b):
        assert x.label == y.label == Label("NonHyperbolicComponent", 0)
        assert x.exponents == y.exponents
        assert math.isnan(x.distances["candidate"])
    summary = summarize(a)
    assert summary["label_counts"] == {"NonHyperbolicComponent(0)": 3}
    assert summary["records"] == 3
