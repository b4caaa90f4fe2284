"""Homological algebra for the module representations.

Everything is driven by minimal projective covers.  The cover of a module
is read off its top (the quotient by all arrows and t); the syzygy is the
kernel of the cover map, computed vertexwise over the power-series centre
with saturated free bases.  Hom spaces and first extension groups come
from the start of the projective resolution

    P1 -> P0 -> M -> 0,

since Hom out of an indecomposable projective is evaluation at its
generator: no linear systems are needed to write the induced maps between
Hom(P_i, N), only to extract kernels and cokernels over the centre.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .dvr import (DVRMatrix, SmithData, ValPoly, _smith, kernel_coordinates,
                  kernel_data, rational_rank, solve_linear)
from .errors import ProjectiveInput, TruncationUnstable
from .modules import CMModuleRep, build_rank1
from .rims import Rim, interlacing_degree
from . import rims as _rims

TRUNCATION_STEP = 2
ESCALATION_CAP_FACTOR = 8


def top_multiset(m: CMModuleRep) -> dict[int, int]:
    """Multiplicity of each vertex in the top of the module.

    At vertex v the top is the cokernel of [x_v | y_{v+1}] taken modulo t,
    so its dimension is s minus the rational rank of the reduced block.
    """
    out = {}
    for v in range(1, m.n + 1):
        nxt = v % m.n + 1
        block = [row_x + row_y for row_x, row_y in
                 zip(m.x[v].mod_t(), m.y[nxt].mod_t())]
        dim = m.s - rational_rank(block)
        if dim:
            out[v] = dim
    return out


@dataclass
class Cover:
    """Minimal projective cover data: one summand per chosen generator."""

    vertices: tuple[int, ...]            # cover vertex of each summand
    generators: tuple[tuple[int, ...], ...]  # generator as a 0/1 vector in M_v
    eps: dict[int, DVRMatrix]            # vertex w -> s x c evaluation matrix

    @property
    def size(self) -> int:
        return len(self.vertices)


def projective_cover(m: CMModuleRep) -> Cover:
    """Minimal cover: projectives at the top vertices, mapped by evaluation."""
    tops = top_multiset(m)
    vertices: list[int] = []
    generators: list[tuple[int, ...]] = []
    for v in sorted(tops):
        nxt = v % m.n + 1
        block = [row_x + row_y for row_x, row_y in
                 zip(m.x[v].mod_t(), m.y[nxt].mod_t())]
        chosen = _extend_to_full_rank(block, m.s)
        if len(chosen) != tops[v]:
            raise AssertionError("top dimension does not match generator count")
        for idx in chosen:
            vertices.append(v)
            generators.append(tuple(1 if i == idx else 0 for i in range(m.s)))
    eps = {}
    for w in range(1, m.n + 1):
        cols = []
        for v, gen in zip(vertices, generators):
            path = m.path_matrix(v, w)
            gen_col = DVRMatrix.from_int_rows([[g] for g in gen], m.trunc)
            cols.append(path @ gen_col)
        if cols:
            mat = cols[0]
            for c in cols[1:]:
                mat = mat.hstack(c)
        else:
            mat = DVRMatrix.zeros(m.s, 0, m.trunc)
        eps[w] = mat
    return Cover(tuple(vertices), tuple(generators), eps)


def _extend_to_full_rank(block: list[list[Fraction]], s: int) -> list[int]:
    """Indices of standard basis vectors completing the column span of block."""
    cols = [list(col) for col in zip(*block)] if block and block[0] else []
    chosen = []
    base_rank = rational_rank([list(r) for r in zip(*cols)]) if cols else 0
    current = [list(r) for r in cols]
    rank_now = base_rank
    for idx in range(s):
        e = [Fraction(1) if i == idx else Fraction(0) for i in range(s)]
        trial = current + [e]
        r = rational_rank([list(r) for r in zip(*trial)])
        if r > rank_now:
            chosen.append(idx)
            current = trial
            rank_now = r
        if rank_now == s:
            break
    return chosen


def is_projective_rep(m: CMModuleRep) -> bool:
    """A module is projective exactly when its minimal cover is an isomorphism."""
    return projective_cover(m).size == m.s


@dataclass
class SyzygyData:
    """Kernel of the cover map with its embedding into the cover."""

    cover: Cover
    omega: CMModuleRep                # kernel, in its own coordinates
    embed: dict[int, DVRMatrix]      # vertex -> cover-size x omega-rank basis
    smith: dict[int, SmithData]      # per-vertex kernel extraction data


def syzygy_data(m: CMModuleRep, cover: Optional[Cover] = None) -> SyzygyData:
    """Compute the syzygy as an explicit submodule of the cover."""
    cover = cover or projective_cover(m)
    c = cover.size
    if c == m.s:
        raise ProjectiveInput("projective module has vanishing stable syzygy")
    n, trunc = m.n, m.trunc
    embed: dict[int, DVRMatrix] = {}
    smith: dict[int, SmithData] = {}
    r = c - m.s
    for w in range(1, n + 1):
        basis, data = kernel_data(cover.eps[w])
        if data.npivots != m.s:
            raise AssertionError(f"cover map not surjective at vertex {w}")
        if len(basis) != r:
            raise AssertionError("kernel rank varies across vertices")
        embed[w] = DVRMatrix([[vec[i] for vec in basis] for i in range(c)],
                             trunc, cols=r)
        smith[w] = data
    x_omega, y_omega = {}, {}
    for v in range(1, n + 1):
        w = (v - 2) % n + 1
        x_omega[v] = _induced_map(m, cover, embed, smith, v, w, v, forward=True)
        y_omega[v] = _induced_map(m, cover, embed, smith, v, v, w, forward=False)
    omega = CMModuleRep(n, m.k, r, x_omega, y_omega, trunc)
    return SyzygyData(cover, omega, embed, smith)


def _cover_edge_scalars(m: CMModuleRep, cover: Cover, edge: int, forward: bool) -> list[ValPoly]:
    """Scalar action of one edge on each rank-1 cover summand."""
    out = []
    for v in cover.vertices:
        inside = edge in _rims._cyclic_interval(v + 1, v + m.k, m.n)
        if forward:
            out.append(ValPoly.one(m.trunc) if inside else ValPoly.t(m.trunc))
        else:
            out.append(ValPoly.t(m.trunc) if inside else ValPoly.one(m.trunc))
    return out


def _induced_map(m: CMModuleRep, cover: Cover, embed, smith, edge: int,
                 src: int, dst: int, forward: bool) -> DVRMatrix:
    """Restriction of a cover structure map to the kernel submodule."""
    scalars = _cover_edge_scalars(m, cover, edge, forward)
    src_mat = embed[src]
    moved = DVRMatrix(
        [[scalars[i] * src_mat.data[i][j] for j in range(src_mat.cols)]
         for i in range(src_mat.rows)], m.trunc, cols=src_mat.cols)
    cols = []
    for j in range(moved.cols):
        coords = kernel_coordinates(smith[dst], moved.column(j))
        cols.append(coords)
    r = src_mat.cols
    return DVRMatrix([[cols[j][i] for j in range(r)] for i in range(r)],
                     m.trunc, cols=r)


def syzygy(m: CMModuleRep) -> CMModuleRep:
    """Kernel of the minimal projective cover, with its induced action."""
    return syzygy_data(m).omega


@dataclass(frozen=True)
class ExtDecomp:
    """Cyclic decomposition of an extension group over the centre."""

    exponents: tuple[int, ...]

    @property
    def total_dim(self) -> int:
        return sum(self.exponents)

    def is_zero(self) -> bool:
        return not self.exponents

    def pretty(self) -> str:
        if not self.exponents:
            return "0"
        parts = ["C" if a == 1 else f"C[[t]]/(t^{a})" for a in self.exponents]
        return " ⊕ ".join(parts)


@dataclass
class HomBasis:
    """Free basis of a Hom space, as vertexwise matrices."""

    generators: list[dict[int, DVRMatrix]]

    @property
    def z_rank(self) -> int:
        return len(self.generators)


def _hom_target_blocks(n_rep: CMModuleRep, sources: tuple[int, ...], w: int) -> list[DVRMatrix]:
    return [n_rep.path_matrix(v, w) for v in sources]


def hom_space(m: CMModuleRep, n_rep: CMModuleRep) -> HomBasis:
    """Module maps m -> n as a free module over the centre.

    A map is determined by the images of the cover generators; it descends
    to m exactly when those images kill the syzygy, a vertexwise linear
    condition solved over the centre.
    """
    if (m.n, m.k) != (n_rep.n, n_rep.k):
        raise ValueError("modules live over different ambients")
    if m.trunc != n_rep.trunc:
        raise ValueError("modules carry different truncation levels")
    cover = projective_cover(m)
    c, sN, trunc = cover.size, n_rep.s, m.trunc
    if c == m.s:
        syz_embed = None
    else:
        syz_embed = syzygy_data(m, cover).embed
    rows: list[list[ValPoly]] = []
    if syz_embed is not None:
        for w in range(1, m.n + 1):
            paths = _hom_target_blocks(n_rep, cover.vertices, w)
            emb = syz_embed[w]
            for j in range(emb.cols):
                for a in range(sN):
                    row = []
                    for i in range(c):
                        u = emb.data[i][j]
                        for b in range(sN):
                            row.append(u * paths[i].data[a][b])
                    rows.append(row)
    constraint = DVRMatrix(rows, trunc, cols=c * sN)
    basis, _ = kernel_data(constraint)
    gens = []
    for vec in basis:
        xi = [DVRMatrix([[vec[i * sN + a]] for a in range(sN)], trunc, cols=1)
              for i in range(c)]
        gens.append(_hom_from_generator_images(m, n_rep, cover, xi))
    return HomBasis(gens)


def _hom_from_generator_images(m: CMModuleRep, n_rep: CMModuleRep, cover: Cover,
                               xi: list[DVRMatrix]) -> dict[int, DVRMatrix]:
    """Vertexwise matrices of the map with the given generator images."""
    out = {}
    sN, sM, trunc = n_rep.s, m.s, m.trunc
    for w in range(1, m.n + 1):
        paths = _hom_target_blocks(n_rep, cover.vertices, w)
        g_cols = [paths[i] @ xi[i] for i in range(cover.size)]
        if g_cols:
            g = g_cols[0]
            for col in g_cols[1:]:
                g = g.hstack(col)
        else:
            g = DVRMatrix.zeros(sN, 0, trunc)
        eps_t = cover.eps[w].transpose()
        f_rows = []
        for a in range(sN):
            rhs = [g.data[a][i] for i in range(cover.size)]
            sol = solve_linear(eps_t, rhs)
            if sol is None:
                raise TruncationUnstable(
                    f"hom evaluation not solvable at vertex {w}")
            f_rows.append(sol)
        out[w] = DVRMatrix(f_rows, trunc, cols=sM)
    return out


@dataclass
class Resolution:
    """First two cover steps of a module, enough for Ext^1."""

    cover0: Cover
    syz1: SyzygyData
    cover1: Cover
    syz2_embed: Optional[dict[int, DVRMatrix]]   # None when the syzygy is projective
    omega_rank: int


def resolve_two_steps(m: CMModuleRep) -> Optional[Resolution]:
    """Covers of m and of its syzygy; None when m itself is projective."""
    cover0 = projective_cover(m)
    if cover0.size == m.s:
        return None
    syz1 = syzygy_data(m, cover0)
    omega = syz1.omega
    cover1 = projective_cover(omega)
    if cover1.size == omega.s:
        syz2_embed = None
    else:
        syz2_embed = syzygy_data(omega, cover1).embed
    return Resolution(cover0, syz1, cover1, syz2_embed, omega.s)


def _ext1_once(m: CMModuleRep, n_rep: CMModuleRep,
               res: Optional[Resolution] = None) -> tuple[int, ...]:
    """Exponents of Ext^1(m, n) at the working truncation."""
    if (m.n, m.k) != (n_rep.n, n_rep.k) or m.trunc != n_rep.trunc:
        raise ValueError("modules must share ambient and truncation")
    res = res or resolve_two_steps(m)
    if res is None:
        return ()
    trunc, sN = m.trunc, n_rep.s
    c0, c1 = res.cover0.size, res.cover1.size
    omega = res.syz1.omega

    # induced map Hom(P0, N) -> Hom(P1, N): evaluate at the generator images
    b1_rows: list[list[ValPoly]] = []
    for j in range(c1):
        wj = res.cover1.vertices[j]
        gen = res.cover1.generators[j]
        emb = res.syz1.embed[wj]
        omega_vec = [sum((emb.data[i][l].scale(gen[l]) for l in range(omega.s)),
                         start=ValPoly.zero(trunc)) for i in range(c0)]
        paths = _hom_target_blocks(n_rep, res.cover0.vertices, wj)
        for a in range(sN):
            row = []
            for i in range(c0):
                u = omega_vec[i]
                for b in range(sN):
                    row.append(u * paths[i].data[a][b])
            b1_rows.append(row)
    B1 = DVRMatrix(b1_rows, trunc, cols=c0 * sN)

    # vanishing conditions on the second syzygy inside Hom(P1, N)
    e_rows: list[list[ValPoly]] = []
    if res.syz2_embed is not None:
        for w in range(1, m.n + 1):
            emb2 = res.syz2_embed[w]
            paths = _hom_target_blocks(n_rep, res.cover1.vertices, w)
            for j in range(emb2.cols):
                for a in range(sN):
                    row = []
                    for i in range(c1):
                        u = emb2.data[i][j]
                        for b in range(sN):
                            row.append(u * paths[i].data[a][b])
                    e_rows.append(row)
    E = DVRMatrix(e_rows, trunc, cols=c1 * sN)
    kernel, kdata = kernel_data(E)

    coord_cols = []
    for j in range(B1.cols):
        coords = kernel_coordinates(kdata, B1.column(j))
        coord_cols.append(coords)
    dim_ker = len(kernel)
    C = DVRMatrix([[coord_cols[j][i] for j in range(B1.cols)] for i in range(dim_ker)],
                  trunc, cols=B1.cols)
    sm = _smith(C, need_u=False)
    free = dim_ker - sm.npivots
    if free:
        raise TruncationUnstable(
            f"extension group shows free rank {free}; raise the truncation")
    return tuple(sorted(e for e in sm.exponents if e > 0))


def ext1(m: CMModuleRep, n_rep: CMModuleRep, *,
         stability_check: bool = True,
         escalation_cap: Optional[int] = None) -> ExtDecomp:
    """Ext^1(m, n) as a product of cyclic modules over the centre.

    When both inputs know how to rebuild themselves, the exponents are
    recomputed at truncation N+2 and must agree; on disagreement the
    truncation escalates (default cap 8n) before TruncationUnstable.
    """
    cap = escalation_cap if escalation_cap is not None else ESCALATION_CAP_FACTOR * m.n
    reb_m, reb_n = m.rebuilder, n_rep.rebuilder
    same = m is n_rep
    if not stability_check or reb_m is None or reb_n is None:
        return ExtDecomp(_ext1_once(m, n_rep))
    trunc = m.trunc
    while True:
        try:
            first = _ext1_once(m, n_rep)
            m2 = reb_m(trunc + TRUNCATION_STEP)
            n2 = m2 if same else reb_n(trunc + TRUNCATION_STEP)
            second = _ext1_once(m2, n2)
            if first == second:
                return ExtDecomp(first)
        except TruncationUnstable:
            pass
        trunc += 2 * TRUNCATION_STEP
        if trunc > cap:
            raise TruncationUnstable(
                f"extension exponents unstable up to truncation cap {cap}")
        m = reb_m(trunc)
        n_rep = m if same else reb_n(trunc)


def ext1_rims(a: Rim, b: Rim, trunc: Optional[int] = None) -> ExtDecomp:
    """Ext^1 between two rank-1 modules given by rims."""
    return ext1(build_rank1(a, trunc), build_rank1(b, trunc))


def is_rigid(m: CMModuleRep) -> bool:
    """True when the module has no self-extensions."""
    return ext1(m, m).is_zero()


def is_indecomposable_rank2(top: Rim, bottom: Rim) -> bool:
    """Poset criterion: the two-layer module is indecomposable iff r >= 3."""
    return interlacing_degree(top, bottom) >= 3


def _det_poly_mod_t(blocks: list[list[list[Fraction]]], s: int) -> dict[tuple[int, ...], Fraction]:
    """det(sum_g lambda_g * blocks[g]) mod t, as a polynomial in lambda."""
    from itertools import permutations

    def sign(perm: tuple[int, ...]) -> int:
        sgn, seen = 1, set()
        for start in range(len(perm)):
            if start in seen:
                continue
            length, i = 0, start
            while i not in seen:
                seen.add(i)
                i = perm[i]
                length += 1
            if length % 2 == 0:
                sgn = -sgn
        return sgn

    total: dict[tuple[int, ...], Fraction] = {}
    for perm in permutations(range(s)):
        sgn = sign(perm)
        prod: dict[tuple[int, ...], Fraction] = {(): Fraction(sgn)}
        for i in range(s):
            nxt: dict[tuple[int, ...], Fraction] = {}
            for mono, coeff in prod.items():
                for g, block in enumerate(blocks):
                    c = block[i][perm[i]]
                    if c:
                        key = tuple(sorted(mono + (g,)))
                        nxt[key] = nxt.get(key, Fraction(0)) + coeff * c
            prod = nxt
            if not prod:
                break
        for mono, coeff in prod.items():
            total[mono] = total.get(mono, Fraction(0)) + coeff
    return {mk: c for mk, c in total.items() if c != 0}


def is_isomorphic(m: CMModuleRep, n_rep: CMModuleRep) -> bool:
    """Module isomorphism test for equal-rank representations.

    A generic element of the Hom space is an isomorphism iff, at every
    vertex, the determinant of a generic combination of the basis maps is
    a unit; mod t this is a polynomial in the combination coefficients,
    nonzero at every vertex exactly when an isomorphism exists.
    """
    if (m.n, m.k, m.s) != (n_rep.n, n_rep.k, n_rep.s):
        return False
    from .modules import rep_a_vector
    if rep_a_vector(m) != rep_a_vector(n_rep):
        return False
    basis = hom_space(m, n_rep).generators
    if not basis:
        return False
    for w in range(1, m.n + 1):
        blocks = [gen[w].mod_t() for gen in basis]
        if not _det_poly_mod_t(blocks, m.s):
            return False
    return True


def _hom_stack(gens: list[dict[int, DVRMatrix]], n: int, trunc: int) -> DVRMatrix:
    """Column per generator: all vertex-matrix entries flattened."""
    cols = []
    for g in gens:
        col = []
        for w in range(1, n + 1):
            mat = g[w]
            for a in range(mat.rows):
                for b in range(mat.cols):
                    col.append(mat.data[a][b])
        cols.append(col)
    return DVRMatrix([[cols[g][i] for g in range(len(cols))]
                      for i in range(len(cols[0]))], trunc, cols=len(cols))


def _ext_class_coordinates(m: CMModuleRep, n_rep: CMModuleRep,
                           syz: SyzygyData, hom: HomBasis) -> SmithData:
    """Smith data of Hom(P0, N) -> Hom(Omega, N) in the hom-basis coordinates."""
    trunc, sN = m.trunc, n_rep.s
    c0 = syz.cover.size
    omega = syz.omega
    stack = _hom_stack(hom.generators, m.n, trunc)
    coord_cols = []
    for i in range(c0):
        v = syz.cover.vertices[i]
        for b0 in range(sN):
            col = []
            for w in range(1, m.n + 1):
                path = n_rep.path_matrix(v, w)
                emb = syz.embed[w]
                for a in range(sN):
                    for j in range(omega.s):
                        col.append(path.data[a][b0] * emb.data[i][j])
            sol = solve_linear(stack, col)
            if sol is None:
                raise TruncationUnstable("cover-induced map escapes the hom space")
            coord_cols.append(sol)
    z = len(hom.generators)
    C = DVRMatrix([[coord_cols[j][i] for j in range(len(coord_cols))]
                   for i in range(z)], trunc, cols=len(coord_cols))
    return _smith(C)


def generic_extension(top: Rim, bottom: Rim, trunc: Optional[int] = None,
                      weights: Optional[tuple[int, ...]] = None) -> CMModuleRep:
    """Middle term of a maximally nonsplit extension of the top rank-1
    module by the bottom one, as an explicit rank-2 representation.

    The extension class is chosen with a unit component in every nonzero
    cyclic factor of the extension group (deterministically, from the
    Smith transform); when the group vanishes this is the direct sum.
    The result is the pushout of the cover presentation of the top module
    along the chosen map, assembled vertexwise with free quotients.
    """
    from .modules import build_rank1, direct_sum, default_truncation
    from . import rims as _r
    if (top.n, top.k) != (bottom.n, bottom.k):
        raise ValueError("rims disagree on (k, n)")
    N = trunc if trunc is not None else default_truncation(top.n)
    top_rep = build_rank1(top, N)
    bot_rep = build_rank1(bottom, N)
    cover = projective_cover(top_rep)
    if cover.size == 1:  # projective top: every extension splits
        return _with_rebuilder(direct_sum(top_rep, bot_rep), top, bottom, weights)
    syz = syzygy_data(top_rep, cover)
    hom = hom_space(syz.omega, bot_rep)
    sm = _ext_class_coordinates(top_rep, bot_rep, syz, hom)
    nonzero = [i for i, e in enumerate(sm.exponents) if e > 0]
    free_tail = list(range(sm.npivots, len(hom.generators)))
    targets = nonzero + free_tail
    if not targets:
        return _with_rebuilder(direct_sum(top_rep, bot_rep), top, bottom, weights)
    # class with chosen components in the cyclic factors: solve U y = indicator
    U = DVRMatrix(sm.U, N, cols=len(hom.generators))
    w = weights if weights is not None else (1,) * len(targets)
    indicator = [ValPoly.zero(N) for _ in range(len(hom.generators))]
    for pos, i in enumerate(targets):
        indicator[i] = ValPoly.monomial(w[pos % len(w)], 0, N)
    y = solve_linear(U, indicator)
    if y is None:
        raise TruncationUnstable("could not lift the extension class")
    f = {v: DVRMatrix.zeros(1, syz.omega.s, N) for v in range(1, top.n + 1)}
    for j, coeff in enumerate(y):
        if coeff.is_zero():
            continue
        gen = hom.generators[j]
        for v in range(1, top.n + 1):
            f[v] = f[v] + gen[v].scale(coeff)
    return _pushout_rank2(top_rep, bot_rep, cover, syz, f, top, bottom, weights)


def _with_rebuilder(rep: CMModuleRep, top: Rim, bottom: Rim,
                    weights: Optional[tuple[int, ...]]) -> CMModuleRep:
    rep.rebuilder = lambda N2: generic_extension(top, bottom, N2, weights)
    return rep


def _pushout_rank2(top_rep: CMModuleRep, bot_rep: CMModuleRep, cover: Cover,
                   syz: SyzygyData, f: dict[int, DVRMatrix],
                   top: Rim, bottom: Rim,
                   weights: Optional[tuple[int, ...]]) -> CMModuleRep:
    """Quotient (bottom + cover) / antidiagonal image of the syzygy."""
    from .modules import build_rank1, direct_sum
    from .rims import rim as _mk
    n, k, N = top_rep.n, top_rep.k, top_rep.trunc
    amb = bot_rep
    for v_cov in cover.vertices:
        proj_rim = _mk([(v_cov + i - 1) % n + 1 for i in range(1, k + 1)], k, n)
        amb = direct_sum(amb, build_rank1(proj_rim, N))
    c = cover.size
    r = syz.omega.s
    projections: dict[int, DVRMatrix] = {}
    for v in range(1, n + 1):
        rows = [[f[v].data[0][j] for j in range(r)]]
        emb = syz.embed[v]
        for i in range(c):
            rows.append([ValPoly.zero(N) - emb.data[i][j] for j in range(r)])
        sub = DVRMatrix(rows, N, cols=r)
        sm = _smith(sub)
        if sm.npivots != r or any(e > 0 for e in sm.exponents):
            raise TruncationUnstable(
                f"extension quotient not free at vertex {v}")
        projections[v] = DVRMatrix(
            [sm.U[i] for i in range(r, 1 + c)], N, cols=1 + c)
    x_new, y_new = {}, {}
    for v in range(1, n + 1):
        w = (v - 2) % n + 1
        x_new[v] = _induced_on_quotient(projections[w], projections[v], amb.x[v], N)
        y_new[v] = _induced_on_quotient(projections[v], projections[w], amb.y[v], N)
    out = CMModuleRep(n, k, 2, x_new, y_new, N)
    out.rebuilder = lambda N2: generic_extension(top, bottom, N2, weights)
    return out


def _induced_on_quotient(proj_src: DVRMatrix, proj_dst: DVRMatrix,
                         amb_map: DVRMatrix, trunc: int) -> DVRMatrix:
    """Solve induced * proj_src = proj_dst * amb_map on the quotient."""
    rhs = proj_dst @ amb_map
    lhs_t = proj_src.transpose()
    rows = []
    for a in range(rhs.rows):
        sol = solve_linear(lhs_t, [rhs.data[a][i] for i in range(rhs.cols)])
        if sol is None:
            raise TruncationUnstable("quotient map not defined over the centre")
        rows.append(sol)
    return DVRMatrix(rows, trunc, cols=proj_src.rows)


# deterministic ladder of extension-class weightings; geometric sequences with
# distinct ratios cannot all land in a fixed finite union of proper subspaces
WEIGHT_LADDER: tuple[tuple[int, ...], ...] = (
    (1, 2, 4, 8, 16, 32),
    (1, 3, 9, 27, 81, 243),
    (1, 1, 1, 1, 1, 1),
    (1, -1, 1, -1, 1, -1),
    (1, 5, 25, 125, 625, 3125),
    (2, 1, 1, 1, 1, 1),
)


def decomposition_rank2(m: CMModuleRep) -> Optional[tuple[Rim, Rim]]:
    """Split a rank-2 representation into two rank-1 summands, if possible.

    Any decomposition must be a pair of rank-1 modules whose multiplicity
    vectors add to that of m, so the finitely many candidate pairs are
    compared by explicit isomorphism.
    """
    from .modules import rep_a_vector, build_rank1, direct_sum
    from .rims import rim as _mk
    if m.s != 2:
        raise ValueError("decomposition test is for rank-2 modules")
    avec = rep_a_vector(m).entries
    twos = [v + 1 for v, c in enumerate(avec) if c == 2]
    ones = [v + 1 for v, c in enumerate(avec) if c == 1]
    need = m.k - len(twos)
    if need < 0 or need > len(ones):
        return None
    from itertools import combinations
    tops = top_multiset(m)
    for chosen in combinations(ones, need):
        if ones and ones[0] not in chosen:
            continue  # unordered pairs: first free vertex goes to the first layer
        u = _mk(twos + list(chosen), m.k, m.n)
        v_elems = twos + [x for x in ones if x not in chosen]
        v = _mk(v_elems, m.k, m.n)
        from .rims import peaks
        expected_top: dict[int, int] = {}
        for p in list(peaks(u)) + list(peaks(v)):
            expected_top[p] = expected_top.get(p, 0) + 1
        if expected_top != tops:
            continue
        cand = direct_sum(build_rank1(u, m.trunc), build_rank1(v, m.trunc))
        if is_isomorphic(m, cand):
            return (u, v)
    return None


_RANK2_CACHE: dict = {}


def rank2_extension(top: Rim, bottom: Rim, trunc: Optional[int] = None) -> CMModuleRep:
    """The canonical rank-2 module with the given ordered profile.

    Walks the weight ladder and returns the first extension middle that is
    rigid and indecomposable (the unique such module when one exists);
    otherwise the first middle, which is the generic extension.
    """
    key = ("ext", top.n, top.k, top.elements, bottom.elements, trunc)
    if key in _RANK2_CACHE:
        return _RANK2_CACHE[key]
    first: Optional[CMModuleRep] = None
    for weights in WEIGHT_LADDER:
        m = generic_extension(top, bottom, trunc, weights=weights)
        if first is None:
            first = m
        if is_rigid(m) and decomposition_rank2(m) is None:
            _RANK2_CACHE[key] = m
            return m
    assert first is not None
    _RANK2_CACHE[key] = first
    return first


def rigid_indecomposable_rank2(top: Rim, bottom: Rim,
                               trunc: Optional[int] = None) -> Optional[CMModuleRep]:
    """The rigid indecomposable module with profile top|bottom, or None."""
    key = ("rigid", top.n, top.k, top.elements, bottom.elements, trunc)
    if key in _RANK2_CACHE:
        return _RANK2_CACHE[key]
    result = None
    for weights in WEIGHT_LADDER:
        m = generic_extension(top, bottom, trunc, weights=weights)
        if is_rigid(m) and decomposition_rank2(m) is None:
            result = m
            break
    _RANK2_CACHE[key] = result
    return result
