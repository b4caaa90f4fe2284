import random
from fractions import Fraction

import pytest

from grasscat.dvr import (DVRMatrix, ValPoly, kernel_basis, rational_rank,
                          smith_over_dvr, solve_linear)
from grasscat.errors import TruncationUnstable

N = 16


def tpow(a, coeff=1, trunc=N):
    return ValPoly.monomial(coeff, a, trunc)


def M(rows, trunc=N):
    return DVRMatrix(rows, trunc)


class TestValPoly:
    def test_valuation(self):
        assert ValPoly.zero(N).valuation() is None
        assert tpow(3).valuation() == 3
        assert (tpow(2) + tpow(5)).valuation() == 2

    def test_arithmetic_truncates_high_degrees_only(self):
        p = tpow(N - 1) * tpow(2)
        assert p.is_zero()
        q = tpow(1) * tpow(2, coeff=Fraction(1, 3))
        assert q.coeffs == {3: Fraction(1, 3)}

    def test_unit_inverse(self):
        u = ValPoly({0: Fraction(2), 1: Fraction(-1)}, N)
        assert (u * u.unit_inverse()) == ValPoly.one(N)

    def test_exact_div(self):
        p = tpow(3, coeff=5)
        q = tpow(1, coeff=5)
        assert p.exact_div(q) == tpow(2)
        with pytest.raises(TruncationUnstable):
            tpow(0).exact_div(tpow(1))


class TestSmith:
    def test_already_diagonal(self):
        inv = smith_over_dvr(M([[tpow(1), tpow(99)], [tpow(99), tpow(0)]]))
        assert inv.exponents == (0, 1)
        assert inv.free_rank == 0

    def test_permuted_diagonal(self):
        inv = smith_over_dvr(M([[ValPoly.zero(N), tpow(0)],
                                [tpow(2), ValPoly.zero(N)]]))
        assert inv.exponents == (0, 2)

    def test_rank_drop(self):
        # second row is t times the first, with signs flipped
        inv = smith_over_dvr(M([[tpow(1, -1), tpow(1)], [tpow(2), tpow(2, -1)]]))
        assert inv.exponents == (1,)
        assert inv.free_rank == 1

    def test_invariance_under_permutation_and_units(self):
        rng = random.Random(7)
        for _ in range(25):
            rows, cols = rng.randint(1, 4), rng.randint(1, 4)
            data = [[tpow(rng.randint(0, 4), coeff=rng.choice([-2, -1, 1, 2, 3]))
                     if rng.random() < 0.7 else ValPoly.zero(N)
                     for _ in range(cols)] for _ in range(rows)]
            base = smith_over_dvr(M(data))
            perm_r = rng.sample(range(rows), rows)
            perm_c = rng.sample(range(cols), cols)
            permuted = [[data[i][j] for j in perm_c] for i in perm_r]
            assert smith_over_dvr(M(permuted)).exponents == base.exponents
            unit = ValPoly({0: Fraction(3), 2: Fraction(1, 2)}, N)
            scaled = [[unit * e for e in row] for row in data]
            assert smith_over_dvr(M(scaled)).exponents == base.exponents

    def test_stability_across_truncations(self):
        rng = random.Random(11)
        for _ in range(15):
            shape = [[(rng.randint(0, 5), rng.choice([-1, 1, 2]))
                      if rng.random() < 0.8 else None
                      for _ in range(3)] for _ in range(3)]

            def build(trunc):
                rows = []
                for row in shape:
                    rows.append([
                        tpow(cell[0], coeff=cell[1], trunc=trunc)
                        if cell is not None else ValPoly.zero(trunc)
                        for cell in row])
                return DVRMatrix(rows, trunc)

            assert smith_over_dvr(build(N)).exponents == \
                smith_over_dvr(build(N + 2)).exponents


class TestKernel:
    def test_identity_has_no_kernel(self):
        assert kernel_basis(DVRMatrix.identity(2, N)) == []

    def test_zero_matrix(self):
        basis = kernel_basis(DVRMatrix.zeros(2, 2, N))
        assert len(basis) == 2

    def test_one_by_two(self):
        basis = kernel_basis(M([[tpow(1), tpow(0, -1)]]))
        assert len(basis) == 1
        v = basis[0]
        assert v[0] == ValPoly.one(N) and v[1] == tpow(1)

    def test_members_satisfy_equation_and_are_independent(self):
        mat = M([[tpow(1, -1), tpow(1)], [tpow(2), tpow(2, -1)]])
        basis = kernel_basis(mat)
        assert len(basis) == 1
        v = basis[0]
        for i in range(2):
            acc = mat.data[i][0] * v[0] + mat.data[i][1] * v[1]
            assert acc.is_zero()


class TestSolve:
    def test_identity(self):
        rhs = [tpow(2), tpow(0, 5)]
        assert solve_linear(DVRMatrix.identity(2, N), rhs) == rhs

    def test_valuation_obstruction(self):
        assert solve_linear(M([[tpow(1)]]), [tpow(0)]) is None

    def test_exact_division(self):
        sol = solve_linear(M([[tpow(1)]]), [tpow(3)])
        assert sol == [tpow(2)]

    def test_incompatible_system(self):
        mat = M([[tpow(0)], [tpow(0)]])
        assert solve_linear(mat, [tpow(0), tpow(1)]) is None


def test_rational_rank():
    one = Fraction(1)
    assert rational_rank([[one, one], [one, one]]) == 1
    assert rational_rank([[one, 0], [0, one]]) == 2
    assert rational_rank([[Fraction(0)]]) == 0
