"""Exact linear algebra over C[[t]] truncated at a working precision.

Elements are polynomials in t with exact rational coefficients, all
arithmetic discarding degrees >= the truncation level N.  The Smith normal
form uses minimal-t-valuation pivoting (every minimal-valuation entry of a
matrix over a DVR divides all the others), which keeps every elimination
step exact modulo t^N.  Kernels and linear solves are read off from the
recorded transformation matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import TruncationUnstable

Coeffs = dict[int, Fraction]


class ValPoly:
    """Polynomial in t, exact rational coefficients, degrees < trunc."""

    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs: Coeffs, trunc: int):
        self.trunc = trunc
        self.coeffs = {d: c for d, c in coeffs.items() if c != 0 and d < trunc}

    @classmethod
    def zero(cls, trunc: int) -> "ValPoly":
        return cls({}, trunc)

    @classmethod
    def monomial(cls, coeff, degree: int, trunc: int) -> "ValPoly":
        return cls({degree: Fraction(coeff)}, trunc)

    @classmethod
    def one(cls, trunc: int) -> "ValPoly":
        return cls.monomial(1, 0, trunc)

    @classmethod
    def t(cls, trunc: int) -> "ValPoly":
        return cls.monomial(1, 1, trunc)

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> Optional[int]:
        """Smallest degree with nonzero coefficient; None for the zero polynomial."""
        return min(self.coeffs) if self.coeffs else None

    def is_unit(self) -> bool:
        return 0 in self.coeffs

    def __add__(self, other: "ValPoly") -> "ValPoly":
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            out[d] = out.get(d, Fraction(0)) + c
        return ValPoly(out, self.trunc)

    def __sub__(self, other: "ValPoly") -> "ValPoly":
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            out[d] = out.get(d, Fraction(0)) - c
        return ValPoly(out, self.trunc)

    def __neg__(self) -> "ValPoly":
        return ValPoly({d: -c for d, c in self.coeffs.items()}, self.trunc)

    def __mul__(self, other: "ValPoly") -> "ValPoly":
        out: Coeffs = {}
        trunc = self.trunc
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                d = d1 + d2
                if d < trunc:
                    out[d] = out.get(d, Fraction(0)) + c1 * c2
        return ValPoly(out, trunc)

    def scale(self, c) -> "ValPoly":
        c = Fraction(c)
        return ValPoly({d: v * c for d, v in self.coeffs.items()}, self.trunc)

    def shift_up(self, a: int) -> "ValPoly":
        """Multiply by t^a."""
        return ValPoly({d + a: c for d, c in self.coeffs.items()}, self.trunc)

    def unit_inverse(self) -> "ValPoly":
        """Power-series inverse of a valuation-0 element, to the truncation."""
        if not self.is_unit():
            raise ZeroDivisionError("only valuation-0 elements are invertible")
        a0 = self.coeffs[0]
        inv: list[Fraction] = [Fraction(1) / a0]
        higher = [(d, c) for d, c in self.coeffs.items() if d > 0]
        for m in range(1, self.trunc):
            acc = Fraction(0)
            for d, c in higher:
                if d <= m:
                    acc += c * inv[m - d]
            inv.append(-acc / a0)
        return ValPoly({d: c for d, c in enumerate(inv)}, self.trunc)

    def exact_div(self, other: "ValPoly") -> "ValPoly":
        """Divide by other = t^a * unit; requires valuation(self) >= a.

        The top a coefficients of the result fall outside the window that
        the inputs determine; they are reported as zero, which the
        stability protocol (recompute at a higher truncation) guards.
        """
        a = other.valuation()
        if a is None:
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return ValPoly.zero(self.trunc)
        if self.valuation() < a:
            raise TruncationUnstable(
                f"inexact division: valuation {self.valuation()} < {a}")
        shifted = ValPoly({d - a: c for d, c in self.coeffs.items()}, self.trunc)
        unit = ValPoly({d - a: c for d, c in other.coeffs.items()}, other.trunc)
        return shifted * unit.unit_inverse()

    def retruncate(self, trunc: int) -> "ValPoly":
        """Drop to a lower truncation level (never widens the window)."""
        if trunc > self.trunc:
            raise ValueError("cannot raise the truncation of an existing value")
        return ValPoly(self.coeffs, trunc)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ValPoly)
            and self.coeffs == other.coeffs
            and self.trunc == other.trunc
        )

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.coeffs.items())), self.trunc))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for d in sorted(self.coeffs):
            c = self.coeffs[d]
            base = "1" if d == 0 else ("t" if d == 1 else f"t^{d}")
            parts.append(base if c == 1 and d > 0 else f"{c}" if d == 0 else f"{c}*{base}")
        return " + ".join(parts)


class DVRMatrix:
    """Immutable matrix of ValPoly entries sharing one truncation level."""

    __slots__ = ("rows", "cols", "trunc", "data")

    def __init__(self, data: Sequence[Sequence[ValPoly]], trunc: int, cols: Optional[int] = None):
        self.data = tuple(tuple(row) for row in data)
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.rows else (cols or 0)
        self.trunc = trunc
        for row in self.data:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")

    @classmethod
    def zeros(cls, rows: int, cols: int, trunc: int) -> "DVRMatrix":
        z = ValPoly.zero(trunc)
        return cls([[z] * cols for _ in range(rows)], trunc, cols=cols)

    @classmethod
    def identity(cls, size: int, trunc: int) -> "DVRMatrix":
        one = ValPoly.one(trunc)
        z = ValPoly.zero(trunc)
        return cls([[one if i == j else z for j in range(size)] for i in range(size)], trunc)

    @classmethod
    def from_int_rows(cls, rows: Sequence[Sequence[int]], trunc: int) -> "DVRMatrix":
        """Constant integer matrix, for generator vectors and permutations."""
        return cls(
            [[ValPoly.monomial(v, 0, trunc) for v in row] for row in rows], trunc)

    def __getitem__(self, idx: tuple[int, int]) -> ValPoly:
        return self.data[idx[0]][idx[1]]

    def __matmul__(self, other: "DVRMatrix") -> "DVRMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = ValPoly.zero(self.trunc)
                for l in range(self.cols):
                    a = self.data[i][l]
                    if a.coeffs:
                        b = other.data[l][j]
                        if b.coeffs:
                            acc = acc + a * b
                row.append(acc)
            out.append(row)
        return DVRMatrix(out, self.trunc)

    def __add__(self, other: "DVRMatrix") -> "DVRMatrix":
        return DVRMatrix(
            [[self.data[i][j] + other.data[i][j] for j in range(self.cols)]
             for i in range(self.rows)], self.trunc)

    def __sub__(self, other: "DVRMatrix") -> "DVRMatrix":
        return DVRMatrix(
            [[self.data[i][j] - other.data[i][j] for j in range(self.cols)]
             for i in range(self.rows)], self.trunc)

    def scale(self, p: ValPoly) -> "DVRMatrix":
        return DVRMatrix(
            [[p * self.data[i][j] for j in range(self.cols)] for i in range(self.rows)],
            self.trunc)

    def transpose(self) -> "DVRMatrix":
        return DVRMatrix(
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.trunc)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.data for e in row)

    def column(self, j: int) -> tuple[ValPoly, ...]:
        return tuple(self.data[i][j] for i in range(self.rows))

    def hstack(self, other: "DVRMatrix") -> "DVRMatrix":
        return DVRMatrix(
            [list(self.data[i]) + list(other.data[i]) for i in range(self.rows)],
            self.trunc)

    def retruncate(self, trunc: int) -> "DVRMatrix":
        return DVRMatrix(
            [[e.retruncate(trunc) for e in row] for row in self.data], trunc)

    def mod_t(self) -> list[list[Fraction]]:
        """Constant terms, as an exact rational matrix."""
        return [[e.coeffs.get(0, Fraction(0)) for e in row] for row in self.data]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DVRMatrix) and self.data == other.data

    def __hash__(self) -> int:
        return hash(self.data)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(repr(e) for e in row) for row in self.data)
        return f"[{body}]"


@dataclass(frozen=True)
class InvariantFactors:
    """Valuations of the nonzero invariant factors, plus cokernel free rank."""

    exponents: tuple[int, ...]
    free_rank: int


@dataclass
class SmithData:
    """Full Smith decomposition U * A * V = S with V inverse tracked."""

    exponents: list[int]
    npivots: int
    U: list[list[ValPoly]]
    V: list[list[ValPoly]]
    V_inv: list[list[ValPoly]]
    rows: int
    cols: int
    trunc: int


def _smith(matrix: DVRMatrix, need_u: bool = True) -> SmithData:
    """Diagonalise over the local ring by minimal-valuation pivoting.

    Pivot selection takes the globally minimal valuation in the remaining
    block, breaking ties by the smallest (row, col) pair; that entry
    divides every other one, so each clearing step is exact modulo t^N.
    Row transforms are skipped when the caller only needs kernels.
    """
    m, p, trunc = matrix.rows, matrix.cols, matrix.trunc
    A = [list(row) for row in matrix.data]
    one, z = ValPoly.one(trunc), ValPoly.zero(trunc)
    U = [[one if i == j else z for j in range(m)] for i in range(m)] if need_u else []
    V = [[one if i == j else z for j in range(p)] for i in range(p)]
    Vi = [[one if i == j else z for j in range(p)] for i in range(p)]
    exponents: list[int] = []
    r = 0
    while r < min(m, p):
        best: Optional[tuple[int, int, int]] = None
        for i in range(r, m):
            for j in range(r, p):
                v = A[i][j].valuation()
                if v is not None and (best is None or v < best[0]):
                    best = (v, i, j)
                    if v == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        val, bi, bj = best
        if val >= trunc:  # unreachable with the sparse representation
            raise TruncationUnstable("pivot valuation at truncation level")
        if bi != r:
            A[r], A[bi] = A[bi], A[r]
            if need_u:
                U[r], U[bi] = U[bi], U[r]
        if bj != r:
            for row in A:
                row[r], row[bj] = row[bj], row[r]
            for row in V:
                row[r], row[bj] = row[bj], row[r]
            Vi[r], Vi[bj] = Vi[bj], Vi[r]
        pivot = A[r][r]
        # normalise the pivot row so the pivot becomes exactly t^val
        unit_inv = ValPoly({d - val: c for d, c in pivot.coeffs.items()}, trunc).unit_inverse()
        for j in range(r, p):
            A[r][j] = unit_inv * A[r][j]
        if need_u:
            for j in range(m):
                U[r][j] = unit_inv * U[r][j]
        pivot = A[r][r]
        for i in range(r + 1, m):
            if A[i][r].is_zero():
                continue
            g = A[i][r].exact_div(pivot)
            for j in range(r, p):
                A[i][j] = A[i][j] - g * A[r][j]
            if need_u:
                for j in range(m):
                    U[i][j] = U[i][j] - g * U[r][j]
        for j in range(r + 1, p):
            if A[r][j].is_zero():
                continue
            g = A[r][j].exact_div(pivot)
            for i in range(r, m):
                A[i][j] = A[i][j] - g * A[i][r]
            for i in range(p):
                V[i][j] = V[i][j] - g * V[i][r]
            for l in range(p):
                Vi[r][l] = Vi[r][l] + g * Vi[j][l]
        exponents.append(val)
        r += 1
    if any(exponents[i] > exponents[i + 1] for i in range(len(exponents) - 1)):
        raise AssertionError("invariant factors out of order; pivoting bug")
    return SmithData(exponents, r, U, V, Vi, m, p, trunc)


def smith_over_dvr(matrix: DVRMatrix) -> InvariantFactors:
    """Invariant factor valuations and cokernel free rank of a matrix."""
    data = _smith(matrix, need_u=False)
    for e in data.exponents:
        if e >= matrix.trunc:
            raise TruncationUnstable(f"invariant factor t^{e} at truncation {matrix.trunc}")
    return InvariantFactors(tuple(data.exponents), matrix.rows - data.npivots)


def _mat_vec(M: list[list[ValPoly]], v: Sequence[ValPoly], trunc: int) -> list[ValPoly]:
    out = []
    for row in M:
        acc = ValPoly.zero(trunc)
        for a, b in zip(row, v):
            if a.coeffs and b.coeffs:
                acc = acc + a * b
        out.append(acc)
    return out


def _normalise_vector(v: list[ValPoly]) -> list[ValPoly]:
    """Scale by the inverse unit part of the minimal-valuation entry."""
    vals = [(e.valuation(), i) for i, e in enumerate(v) if not e.is_zero()]
    if not vals:
        return v
    val, idx = min(vals)
    lead = v[idx]
    unit_inv = ValPoly({d - val: c for d, c in lead.coeffs.items()}, lead.trunc).unit_inverse()
    return [unit_inv * e for e in v]


def kernel_basis(matrix: DVRMatrix) -> list[tuple[ValPoly, ...]]:
    """Free basis of the kernel, each vector normalised to monic lead.

    The basis columns come from the recorded column transform, so they
    span a saturated (direct summand) submodule; membership is
    re-verified below the truncation as a guard.
    """
    data = _smith(matrix, need_u=False)
    basis = []
    for j in range(data.npivots, matrix.cols):
        vec = _normalise_vector([data.V[i][j] for i in range(matrix.cols)])
        image = _mat_vec([list(r) for r in matrix.data], vec, matrix.trunc)
        if any(not e.is_zero() for e in image):
            raise TruncationUnstable("kernel vector fails membership below truncation")
        basis.append(tuple(vec))
    return basis


def kernel_data(matrix: DVRMatrix) -> tuple[list[tuple[ValPoly, ...]], SmithData]:
    """Kernel basis (unnormalised) together with the Smith transform data."""
    data = _smith(matrix, need_u=False)
    basis = [tuple(data.V[i][j] for i in range(matrix.cols))
             for j in range(data.npivots, matrix.cols)]
    return basis, data


def kernel_coordinates(data: SmithData, vector: Sequence[ValPoly]) -> list[ValPoly]:
    """Coordinates of a kernel element in the basis from ``kernel_data``."""
    y = _mat_vec(data.V_inv, vector, data.trunc)
    for i in range(data.npivots):
        if not y[i].is_zero():
            raise TruncationUnstable("vector is not in the kernel at working precision")
    return y[data.npivots:]


def solve_linear(matrix: DVRMatrix, rhs: Sequence[ValPoly]) -> Optional[list[ValPoly]]:
    """One solution of matrix * x = rhs, or None when none exists."""
    if len(rhs) != matrix.rows:
        raise ValueError("right-hand side has wrong length")
    data = _smith(matrix)
    ub = _mat_vec(data.U, rhs, matrix.trunc)
    y = [ValPoly.zero(matrix.trunc) for _ in range(matrix.cols)]
    for i in range(data.npivots):
        if ub[i].is_zero():
            continue
        if ub[i].valuation() < data.exponents[i]:
            return None
        y[i] = ValPoly(
            {d - data.exponents[i]: c for d, c in ub[i].coeffs.items()}, matrix.trunc)
    for i in range(data.npivots, matrix.rows):
        if not ub[i].is_zero():
            return None
    return _mat_vec(data.V, y, matrix.trunc)


def rational_rank(rows: list[list[Fraction]]) -> int:
    """Rank of an exact rational matrix by Gaussian elimination."""
    M = [row[:] for row in rows]
    nrows = len(M)
    ncols = len(M[0]) if nrows else 0
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = Fraction(1) / M[rank][col]
        M[rank] = [x * inv for x in M[rank]]
        for i in range(nrows):
            if i != rank and M[i][col] != 0:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank
