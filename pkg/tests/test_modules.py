import random

import pytest

from grasscat.dvr import DVRMatrix, ValPoly
from grasscat.errors import EmbeddingFailure, NotRankOne
from grasscat.modules import (CMModuleRep, Profile, a_vector, build_layered,
                              build_profile, build_rank1, diagonal_embedding,
                              direct_sum, identify_rank1, lattice_diagram_data,
                              parse_profile, profile, rep_a_vector,
                              sigma_power, validate_relations)
from grasscat.rims import all_rims, is_projective, rim

N = 16


class TestSigma:
    def test_s2(self):
        s1 = sigma_power(2, 1, N)
        assert [[repr(e) for e in row] for row in s1.data] == [["0", "1"], ["t", "0"]]
        assert sigma_power(2, 2, N) == DVRMatrix.identity(2, N).scale(ValPoly.t(N))

    def test_s3_closed_form(self):
        s2 = sigma_power(3, 2, N)
        assert [[repr(e) for e in row] for row in s2.data] == \
            [["0", "0", "1"], ["t", "0", "0"], ["0", "t", "0"]]

    def test_powers_multiply(self):
        for s in range(2, 7):
            step = sigma_power(s, 1, N)
            acc = DVRMatrix.identity(s, N)
            for j in range(1, s + 1):
                acc = step @ acc
                assert acc == sigma_power(s, j, N)
            assert acc == DVRMatrix.identity(s, N).scale(ValPoly.t(N))

    def test_range_check(self):
        with pytest.raises(ValueError):
            sigma_power(3, 4, N)


class TestBuildRank1:
    def test_structure_scalars(self):
        m = build_rank1(rim([1, 4, 5], 3, 8), N)
        for i in range(1, 9):
            xv = m.x[i].data[0][0]
            yv = m.y[i].data[0][0]
            if i in (1, 4, 5):
                assert (xv, yv) == (ValPoly.one(N), ValPoly.t(N))
            else:
                assert (xv, yv) == (ValPoly.t(N), ValPoly.one(N))
            assert xv * yv == ValPoly.t(N)

    def test_projective_rim_is_projective_module(self):
        # the interval {6,7,8} over (3,8) is the projective at vertex 5
        from grasscat.homology import is_projective_rep, top_multiset
        m = build_rank1(rim([6, 7, 8], 3, 8), N)
        assert is_projective_rep(m)
        assert top_multiset(m) == {5: 1}

    def test_validates(self):
        for k, n in [(2, 5), (3, 7), (4, 9)]:
            for r in all_rims(k, n):
                assert validate_relations(build_rank1(r)) == []


class TestBuildLayered:
    def test_example_pair_49(self):
        m = build_layered([rim([2, 5, 8, 9], 4, 9), rim([1, 3, 7, 8], 4, 9)])
        assert validate_relations(m) == []
        assert m.s == 2

    def test_single_layer_equals_rank1(self):
        r = rim([1, 4, 5], 3, 8)
        a, b = build_layered([r], N), build_rank1(r, N)
        assert a.x == b.x and a.y == b.y

    def test_three_layers_38(self):
        m = build_layered([rim([3, 6, 8], 3, 8), rim([2, 5, 8], 3, 8),
                           rim([1, 4, 7], 3, 8)])
        assert m.s == 3
        assert validate_relations(m) == []

    def test_random_pairs_validate(self):
        rng = random.Random(0)
        for k, n in [(3, 8), (4, 9)]:
            rims_all = all_rims(k, n)
            for _ in range(20):
                pair = rng.sample(rims_all, 2)
                assert validate_relations(build_layered(pair)) == []

    def test_corrupted_module_fails_at_vertex(self):
        m = build_rank1(rim([1, 4, 5], 3, 8), N)
        bad_x = dict(m.x)
        bad_x[3], bad_x[4] = bad_x[4], bad_x[3]  # flip one pair of maps
        bad = CMModuleRep(8, 3, 1, bad_x, m.y, N)
        report = validate_relations(bad)
        assert report
        assert any("vertex 3" in line or "x_3" in line or "x_4" in line
                   for line in report)


class TestRankAndAVector:
    def test_ranks(self):
        assert build_rank1(rim([1, 3, 5], 3, 6)).s == 1
        assert build_layered([rim([1, 3, 5], 3, 6), rim([2, 4, 6], 3, 6)]).s == 2
        s = direct_sum(build_rank1(rim([1, 2, 3], 3, 6), N),
                       build_rank1(rim([4, 5, 6], 3, 6), N))
        assert s.s == 2 and validate_relations(s) == []

    def test_a_vector_examples(self):
        assert a_vector(profile([[1, 3, 5], [2, 4, 6]], 3, 6)).entries == (1,) * 6
        assert a_vector(profile([[2, 5, 6, 8], [1, 3, 4, 7]], 4, 8)).entries == (1,) * 8
        assert a_vector(profile([[1, 2, 3]], 3, 8)).entries == \
            (1, 1, 1, 0, 0, 0, 0, 0)

    def test_a_vector_order_independent(self):
        p = profile([[1, 2, 4, 6], [2, 3, 5, 7]], 4, 8)
        assert a_vector(p).entries == a_vector(p.swap()).entries

    def test_rep_a_vector_matches(self):
        p = profile([[2, 5, 7], [1, 3, 6]], 3, 8)
        assert rep_a_vector(build_profile(p)).entries == a_vector(p).entries


class TestIdentifyRank1:
    def test_roundtrip(self):
        for r in all_rims(3, 7):
            assert identify_rank1(build_rank1(r)) == r

    def test_rescaled_basis(self):
        # multiplying every basis vector by t conjugates by a central scalar
        # and leaves the structure maps unchanged
        r = rim([1, 4, 5], 3, 8)
        m = build_rank1(r, N)
        rescaled = CMModuleRep(8, 3, 1, dict(m.x), dict(m.y), N)
        assert identify_rank1(rescaled) == r

    def test_unit_conjugated_basis(self):
        # conjugating by unit scalars at each vertex is a genuine isomorphism
        r = rim([1, 4, 5], 3, 8)
        m = build_rank1(r, N)
        units = {v: ValPoly({0: 1, 1: v}, N) for v in range(9)}
        units[8] = units[0]
        x, y = {}, {}
        for i in range(1, 9):
            prev = (i - 2) % 8 + 1 if i > 1 else 8
            gi, gp = units[i % 8], units[(i - 1) % 8]
            x[i] = DVRMatrix([[gi * m.x[i].data[0][0] * gp.unit_inverse()]], N)
            y[i] = DVRMatrix([[gp * m.y[i].data[0][0] * gi.unit_inverse()]], N)
        twisted = CMModuleRep(8, 3, 1, x, y, N)
        assert validate_relations(twisted) == []
        assert identify_rank1(twisted) == r

    def test_rejects_higher_rank(self):
        with pytest.raises(NotRankOne):
            identify_rank1(build_layered([rim([1, 3, 5], 3, 6),
                                          rim([2, 4, 6], 3, 6)]))


class TestDiagonalEmbedding:
    def test_parallel_rims(self):
        r = rim([1, 4, 5], 3, 8)
        e = diagonal_embedding(r, r)
        assert e.cokernel_rim == r
        assert all(v == (0, 0) for v in e.valuations.values())

    def test_crossing_pair(self):
        e = diagonal_embedding(rim([1, 3, 5], 3, 6), rim([2, 4, 6], 3, 6))
        assert e.cokernel_rim == rim([1, 3, 5], 3, 6)
        assert validate_relations(e.cokernel) == []

    def test_three_interlacing_pair(self):
        e = diagonal_embedding(rim([2, 5, 7], 3, 8), rim([1, 3, 6], 3, 8))
        assert e.cokernel_rim == rim([2, 5, 7], 3, 8)

    def test_end_terms_for_interlacing_pairs(self):
        # the layered module carries the claimed filtration for pairs of
        # interlacing degree >= 3 (and trivially for parallel pairs)
        from grasscat.rims import interlacing_degree
        for k, n in [(3, 6), (3, 8)]:
            rims_all = all_rims(k, n)
            for a in rims_all:
                for b in rims_all:
                    if a == b or interlacing_degree(a, b) >= 3:
                        e = diagonal_embedding(a, b)
                        assert e.cokernel_rim == a

    def test_two_interlacing_pair_can_work(self):
        e = diagonal_embedding(rim([1, 3], 2, 4), rim([2, 4], 2, 4))
        assert e.cokernel_rim == rim([1, 3], 2, 4)

    def test_noncrossing_distinct_pair_fails(self):
        # the two-layer module of a non-crossing pair splits with different
        # layers, so no monomial placement leaves a free rank-1 cokernel
        with pytest.raises(EmbeddingFailure):
            diagonal_embedding(rim([1, 2], 2, 4), rim([3, 4], 2, 4))


class TestLatticeDiagram:
    def test_figure_geometry(self):
        # heights of the printed single-layer diagram, normalised to min 0
        d = lattice_diagram_data(Profile((rim([1, 4, 5], 3, 8),)))
        assert d["polylines"][0] == [1, 0, 1, 2, 1, 0, 1, 2, 3]
        assert d["columns"][0]["label"] == 8

    def test_projective_staircase(self):
        d = lattice_diagram_data(Profile((rim([6, 7, 8], 3, 8),)))
        h = d["polylines"][0]
        assert h == [h[0]] + [h[0] + i for i in range(1, 6)] + \
            [h[0] + 4, h[0] + 3, h[0] + 2]

    def test_two_layer_stacking(self):
        p = profile([[2, 5, 8, 9], [1, 3, 7, 8]], 4, 9)
        d = lattice_diagram_data(p)
        top, bottom = d["polylines"]
        assert all(b <= t for t, b in zip(top, bottom))
        assert any(b == t for t, b in zip(top, bottom))  # layers touch
        assert min(min(top), min(bottom)) == 0

    def test_parse_profile(self):
        p = parse_profile("246|135@(3,9)")
        assert [r.elements for r in p.layers] == [(2, 4, 6), (1, 3, 5)]


def test_rank1_validates_up_to_n12():
    # every rank-1 module over every ambient with n <= 12 satisfies the
    # defining relations
    for n in range(5, 13):
        for k in range(2, n // 2 + 1):
            for r in all_rims(k, n):
                assert validate_relations(build_rank1(r, 2 * n)) == [], r
