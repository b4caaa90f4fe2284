import json

from grasscat.census import (CENSUS_TABLE, RANK3_LITERATURE, negative_control_48,
                             rank2_candidates, run_census, verify_conjectures)
from grasscat.modules import Profile
from grasscat.rims import classify_pair, rim, shift
from grasscat.roots import enumerate_degree2_real_roots


class TestSmallCensus:
    def test_36_counts_and_profiles(self, census_reports):
        rep = census_reports[(3, 6)]
        assert rep.counts() == {"rank1": 20, "rank2_rigid": 2,
                                "real": 2, "imaginary": 0}
        labels = sorted(e.profile.label() for e in rep.rank2_rigid)
        assert labels == ["135|246", "246|135"]
        assert rep.fixture_diffs == []

    def test_37_counts(self, census_reports):
        rep = census_reports[(3, 7)]
        assert rep.counts()["rank2_rigid"] == 14
        assert rep.fixture_diffs == []

    def test_38_counts(self, census_reports):
        rep = census_reports[(3, 8)]
        assert rep.counts()["rank2_rigid"] == 56
        assert rep.fixture_diffs == []

    def test_conjectures_36(self, census_reports):
        conj = verify_conjectures(3, 6, report=census_reports[(3, 6)])
        assert all(conj.verdicts().values())


class TestTameCensus:
    def test_39(self, census_reports):
        rep = census_reports[(3, 9)]
        assert rep.counts() == {"rank1": 84, "rank2_rigid": 168,
                                "real": 168, "imaginary": 0}
        # every class over (3,9) has a unique tight filtration
        assert all(len(e.profiles) == 1 for e in rep.rank2_rigid)
        assert all(classify_pair(*e.profile.layers).tight for e in rep.rank2_rigid)

    def test_48(self, census_reports):
        rep = census_reports[(4, 8)]
        assert rep.counts() == {"rank1": 70, "rank2_rigid": 120,
                                "real": 112, "imaginary": 8}

    def test_48_imaginary_shift_orbit(self, census_reports):
        rep = census_reports[(4, 8)]
        imag = [e for e in rep.rank2_rigid if e.classification == "imaginary"]
        assert len(imag) == 8
        base = Profile((rim([1, 2, 4, 6], 4, 8), rim([3, 5, 7, 8], 4, 8)))
        orbit_profiles = {base.shift(m).label() for m in range(8)}
        hit = set()
        for e in imag:
            inside = {p.label() for p in e.profiles} & orbit_profiles
            assert len(inside) == 1
            hit |= inside
        assert hit == orbit_profiles
        # all eight carry the all-ones multiplicity vector
        assert all(e.a_vec == (1,) * 8 for e in imag)

    def test_48_real_split(self, census_reports):
        rep = census_reports[(4, 8)]
        real = [e for e in rep.rank2_rigid if e.classification == "real"]
        assert all(sum(1 for p in e.profiles
                       if classify_pair(*p.layers).tight) == 1 for e in real)
        inters = {len(set(e.profile.layers[0].elements)
                      & set(e.profile.layers[1].elements)) for e in real}
        assert inters == {1}

    def test_fiber_over_real_roots(self, census_reports):
        for k, n in [(3, 9), (4, 8)]:
            rep = census_reports[(k, n)]
            fibers = {}
            for e in rep.rank2_rigid:
                if e.classification == "real":
                    fibers.setdefault(e.a_vec, []).append(e)
            roots = {v.entries for v in enumerate_degree2_real_roots(k, n)}
            assert set(fibers) == roots
            assert all(len(v) == 2 for v in fibers.values())

    def test_conjectures_48(self, census_reports):
        conj = verify_conjectures(4, 8, report=census_reports[(4, 8)])
        assert all(conj.verdicts().values())
        assert conj.formula_count == 112


class TestCandidates:
    def test_39_candidate_set(self):
        cands = rank2_candidates(3, 9)
        assert len(cands) == 168
        assert all(classify_pair(a, b).tight for a, b in cands)

    def test_48_candidate_count(self):
        cands = rank2_candidates(4, 8)
        # 112 tight + 24 disjoint 3-interlacing + 2 alternating 4-interlacing
        assert len(cands) == 138


class TestSampleMode:
    def test_smoke_run(self):
        rep = run_census(3, 8, sample=0.05, seed=1)
        assert rep.sampled
        assert rep.candidates_tested >= 1
        assert all(ok for ok in rep.candidate_verdicts.values())


class TestNegativeControl:
    def test_1247_3568(self, census_reports):
        out = negative_control_48()
        assert out["layered_sigma_is_rigid"] is False
        assert out["extension_class_coincides_with"] == "1457|2368"
        # the filtration names an existing imaginary-type class instead of
        # growing the census beyond the eight
        rep = census_reports[(4, 8)]
        containing = [e for e in rep.rank2_rigid
                      if "1247|3568" in {p.label() for p in e.profiles}]
        assert len(containing) == 1
        entry = containing[0]
        assert entry.classification == "imaginary"
        assert "1457|2368" in {p.label() for p in entry.profiles}


class TestCacheRoundTrip:
    def test_cache_reload(self, tmp_path, census_reports):
        rep = run_census(3, 6, cache_dir=tmp_path)
        path = tmp_path / "census-3-6.json"
        assert path.exists()
        blob = json.loads(path.read_text())
        assert blob["counts"]["rank2_rigid"] == 2
        again = run_census(3, 6, cache_dir=tmp_path)
        assert "loaded from cache" in again.notes
        assert again.counts() == rep.counts()
        labels = sorted(e.profile.label() for e in again.rank2_rigid)
        assert labels == ["135|246", "246|135"]

    def test_literature_fixture_recorded(self):
        assert RANK3_LITERATURE == {(3, 9): 117, (4, 8): 82}
        assert CENSUS_TABLE[(4, 8)]["imaginary"] == 8


class TestParallelCensus:
    def test_jobs_worker_pool_matches_serial(self, census_reports):
        rep = run_census(3, 6, jobs=2)
        assert rep.counts() == census_reports[(3, 6)].counts()


class TestClosures:
    def test_shift_closure(self, census_reports):
        for k, n in [(3, 9), (4, 8)]:
            rep = census_reports[(k, n)]
            labels = {p.label() for e in rep.rank2_rigid for p in e.profiles}
            for e in rep.rank2_rigid:
                for p in e.profiles:
                    assert p.shift(k).label() in labels, p

    def test_39_swap_closure_is_total(self, census_reports):
        rep = census_reports[(3, 9)]
        labels = {e.profile.label() for e in rep.rank2_rigid}
        assert {e.profile.swap().label() for e in rep.rank2_rigid} == labels
