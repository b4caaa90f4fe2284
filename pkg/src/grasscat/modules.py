"""Concrete module representations over the boundary algebra.

A module of rank s is a representation of the doubled circular quiver on
n vertices: one free module of rank s per vertex and, for every edge i,
structure matrices x_i (forward) and y_i (backward) over the power-series
centre, subject to x_i y_i = y_{i+1} x_{i+1} = t and x^k = y^{n-k}.

Layered modules are built from an ordered list of rims via powers of the
cyclic shift matrix sigma (sigma^s = t * Id); the single-rim case recovers
the classical rank-1 modules with scalar maps 1 and t.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .dvr import DVRMatrix, ValPoly, _smith
from .errors import EmbeddingFailure, NotRankOne
from .rims import Rim, rim
from .roots import RootVector


@dataclass(frozen=True)
class Profile:
    """Ordered filtration data, top (quotient) layer first."""

    layers: tuple[Rim, ...]

    def __post_init__(self) -> None:
        ambients = {(r.n, r.k) for r in self.layers}
        if len(ambients) > 1:
            raise ValueError(f"profile layers disagree on (k, n): {ambients}")

    @property
    def n(self) -> int:
        return self.layers[0].n

    @property
    def k(self) -> int:
        return self.layers[0].k

    def shift(self, m: int) -> "Profile":
        from . import rims as _rims
        return Profile(tuple(_rims.shift(r, m) for r in self.layers))

    def swap(self) -> "Profile":
        return Profile(tuple(reversed(self.layers)))

    def label(self) -> str:
        return "|".join(r.label() for r in self.layers)

    def __str__(self) -> str:
        return self.label()


def profile(layer_lists, k: int, n: int) -> Profile:
    return Profile(tuple(rim(ls, k, n) for ls in layer_lists))


def parse_profile(token: str) -> Profile:
    """Parse "246|135@(3,9)" (or a single rim token) into a profile."""
    from .rims import parse_rim
    body, _, ambient = token.partition("@")
    parts = body.split("|")
    return Profile(tuple(parse_rim(f"{p}@{ambient}") for p in parts))


class CMModuleRep:
    """Quiver representation: rank-s free modules with 2n structure matrices.

    ``x[i]`` maps vertex i-1 to vertex i and ``y[i]`` maps vertex i back to
    vertex i-1 (labels taken mod n in [1, n]).  Instances are treated as
    immutable; ``rebuilder`` regenerates the same module at a different
    truncation when the construction is known (layered builds and sums).
    """

    __slots__ = ("n", "k", "s", "x", "y", "trunc", "rebuilder", "_paths")

    def __init__(self, n: int, k: int, s: int,
                 x: dict[int, DVRMatrix], y: dict[int, DVRMatrix],
                 trunc: int,
                 rebuilder: Optional[Callable[[int], "CMModuleRep"]] = None):
        self.n, self.k, self.s, self.trunc = n, k, s, trunc
        self.x, self.y = dict(x), dict(y)
        self.rebuilder = rebuilder
        self._paths: dict[tuple[int, int], DVRMatrix] = {}

    def vertex_before(self, i: int) -> int:
        return (i - 2) % self.n + 1

    def path_matrix(self, v: int, w: int) -> DVRMatrix:
        """Composite of structure maps along the canonical route v -> w.

        The route takes x-steps when (w - v) mod n <= k and y-steps
        otherwise; on the projective at v these routes carry the generator
        to the canonical basis vector of every vertex component.
        """
        key = (v, w)
        cached = self._paths.get(key)
        if cached is not None:
            return cached
        n = self.n
        d = (w - v) % n
        mat = DVRMatrix.identity(self.s, self.trunc)
        if d <= self.k:
            for step in range(1, d + 1):
                mat = self.x[(v + step - 1) % n + 1] @ mat
        else:
            for step in range(n - d):
                mat = self.y[(v - step - 1) % n + 1] @ mat
        self._paths[key] = mat
        return mat


def sigma_power(s: int, j: int, trunc: int) -> DVRMatrix:
    """j-th power of the s x s cyclic shift with a t in the corner.

    sigma^j has ones on the j-th superdiagonal and t on the (s-j)-th
    subdiagonal; sigma^s = t * Id.
    """
    if not 0 <= j <= s:
        raise ValueError(f"need 0 <= j <= s, got j={j}, s={s}")
    z = ValPoly.zero(trunc)
    rows = [[z] * s for _ in range(s)]
    for i in range(1, s - j + 1):
        rows[i - 1][i + j - 1] = ValPoly.one(trunc)
    for i in range(1, j + 1):
        rows[s + i - j - 1][i - 1] = ValPoly.t(trunc)
    return DVRMatrix(rows, trunc, cols=s)


def default_truncation(n: int) -> int:
    return 2 * n


def build_layered(layers: Sequence[Rim], trunc: Optional[int] = None) -> CMModuleRep:
    """Module with the given ordered rims as filtration layers.

    At edge i the forward map is sigma^(s - r_i) and the backward map is
    sigma^(r_i), where r_i counts the layers containing i.
    """
    layers = tuple(layers)
    if not layers:
        raise ValueError("need at least one layer")
    n, k = layers[0].n, layers[0].k
    for r in layers:
        if (r.n, r.k) != (n, k):
            raise ValueError("layers disagree on (k, n)")
    s = len(layers)
    N = trunc if trunc is not None else default_truncation(n)
    x, y = {}, {}
    for i in range(1, n + 1):
        r_i = sum(1 for r in layers if i in r)
        x[i] = sigma_power(s, s - r_i, N)
        y[i] = sigma_power(s, r_i, N)
    return CMModuleRep(n, k, s, x, y, N,
                       rebuilder=lambda N2: build_layered(layers, N2))


def build_rank1(r: Rim, trunc: Optional[int] = None) -> CMModuleRep:
    """Rank-1 module of a rim: x_i is 1 on the rim and t off it, y_i opposite."""
    return build_layered([r], trunc)


def build_profile(p: Profile, trunc: Optional[int] = None) -> CMModuleRep:
    return build_layered(p.layers, trunc)


def direct_sum(a: CMModuleRep, b: CMModuleRep) -> CMModuleRep:
    """Block direct sum of two representations over the same ambient."""
    if (a.n, a.k) != (b.n, b.k) or a.trunc != b.trunc:
        raise ValueError("direct sum needs matching ambient and truncation")
    n, trunc = a.n, a.trunc

    def block(ma: DVRMatrix, mb: DVRMatrix) -> DVRMatrix:
        size = ma.rows + mb.rows
        z = ValPoly.zero(trunc)
        rows = [[z] * size for _ in range(size)]
        for i in range(ma.rows):
            for j in range(ma.cols):
                rows[i][j] = ma.data[i][j]
        for i in range(mb.rows):
            for j in range(mb.cols):
                rows[ma.rows + i][ma.cols + j] = mb.data[i][j]
        return DVRMatrix(rows, trunc, cols=size)

    x = {i: block(a.x[i], b.x[i]) for i in range(1, n + 1)}
    y = {i: block(a.y[i], b.y[i]) for i in range(1, n + 1)}
    reb_a, reb_b = a.rebuilder, b.rebuilder
    rebuilder = None
    if reb_a is not None and reb_b is not None:
        rebuilder = lambda N2: direct_sum(reb_a(N2), reb_b(N2))
    return CMModuleRep(n, a.k, a.s + b.s, x, y, trunc, rebuilder=rebuilder)


def validate_relations(m: CMModuleRep) -> list[str]:
    """Check x_i y_i = y_{i+1} x_{i+1} = t and x^k = y^{n-k} everywhere.

    Violations are returned as strings naming the vertex and relation;
    an empty report means the representation is a genuine module.
    """
    n, k, s = m.n, m.k, m.s
    t_id = DVRMatrix.identity(s, m.trunc).scale(ValPoly.t(m.trunc))
    report = []
    for i in range(1, n + 1):
        if m.x[i] @ m.y[i] != t_id:
            report.append(f"x_{i} y_{i} != t id at vertex {i}")
        nxt = i % n + 1
        if m.y[nxt] @ m.x[nxt] != t_id:
            report.append(f"y_{nxt} x_{nxt} != t id at vertex {i}")
    for start in range(1, n + 1):
        xk = DVRMatrix.identity(s, m.trunc)
        for step in range(1, k + 1):
            xk = m.x[(start + step - 1) % n + 1] @ xk
        ynk = DVRMatrix.identity(s, m.trunc)
        for step in range(n - k):
            ynk = m.y[(start - step - 1) % n + 1] @ ynk
        if xk != ynk:
            report.append(f"x^{k} != y^{n - k} starting at vertex {start}")
    return report


def rank(m: CMModuleRep) -> int:
    """Generic rank: the common free rank of the vertex components."""
    return m.s


def a_vector(p: Profile) -> RootVector:
    """Multiplicity of each vertex label across the layers of a profile."""
    n = p.n
    counts = [0] * n
    for layer in p.layers:
        for v in layer.elements:
            counts[v - 1] += 1
    return RootVector(tuple(counts), p.k)


def rep_a_vector(m: CMModuleRep) -> RootVector:
    """Layer multiplicities recovered from a representation.

    The t-valuation of det(x_i) equals s - r_i in any basis, so the
    multiplicity vector survives base change; valuations are read off the
    Smith exponents of each x_i.
    """
    counts = []
    for i in range(1, m.n + 1):
        sm = _smith(m.x[i], need_u=False)
        if sm.npivots != m.s:
            raise ValueError(f"x_{i} is singular at working precision")
        counts.append(m.s - sum(sm.exponents))
    if any(c < 0 or c > m.s for c in counts):
        raise ValueError(f"multiplicity vector {counts} out of range")
    return RootVector(tuple(counts), m.k)


def identify_rank1(m: CMModuleRep) -> Rim:
    """The unique rim I with m isomorphic to the rank-1 module of I.

    Requires rank 1 with valid relations; the rim is the set of edges
    whose forward map is a unit.
    """
    if m.s != 1:
        raise NotRankOne(f"rank {m.s} module passed to rank-1 identification")
    if validate_relations(m):
        raise NotRankOne("relations fail; not a module")
    members = []
    for i in range(1, m.n + 1):
        v = m.x[i].data[0][0].valuation()
        if v == 0:
            members.append(i)
        elif v != 1:
            raise NotRankOne(f"x_{i} has valuation {v}, expected 0 or 1")
    if len(members) != m.k:
        raise NotRankOne(f"unit edges {members} do not form a {m.k}-subset")
    return rim(members, m.k, m.n)


@dataclass
class EmbeddingResult:
    """Bottom layer embedded into the two-layer module, with its cokernel."""

    top: Rim
    bottom: Rim
    injection: dict[int, DVRMatrix]      # vertex -> 2x1 column (t^p, t^q)
    valuations: dict[int, tuple[int, int]]
    cokernel: CMModuleRep
    cokernel_rim: Rim


def diagonal_embedding(top: Rim, bottom: Rim, trunc: Optional[int] = None) -> EmbeddingResult:
    """Embed the bottom rank-1 module into the layered module, maximally high.

    The embedding is monomial per vertex, (t^p, t^q); forward-map
    equivariance propagates the exponent pair around the circle, and the
    componentwise-minimal nonnegative solution is the highest placement.
    The cokernel must be free of rank 1 at every vertex, which holds for
    parallel and crossing pairs; otherwise EmbeddingFailure is raised.
    """
    if (top.n, top.k) != (bottom.n, bottom.k):
        raise ValueError("rims disagree on (k, n)")
    n = top.n
    N = trunc if trunc is not None else default_truncation(n)
    # propagate symbolic exponents (slot, offset); slots A, B start at vertex n
    state = [("A", 0), ("B", 0)]
    slots: dict[int, tuple[tuple[str, int], tuple[str, int]]] = {}
    for v in range(1, n + 1):
        (sp, op), (sq, oq) = state
        in_top, in_bot = v in top, v in bottom
        if in_top and not in_bot:
            state = [(sq, oq - 1), (sp, op)]
        elif in_bot and not in_top:
            state = [(sq, oq), (sp, op + 1)]
        slots[v] = (state[0], state[1])
    if slots[n] != (("A", 0), ("B", 0)):
        raise EmbeddingFailure(f"monodromy mismatch for {top}|{bottom}")
    lows = {"A": 0, "B": 0}
    for v in range(1, n + 1):
        for slot, off in slots[v]:
            lows[slot] = min(lows[slot], off)
    base = {"A": -lows["A"], "B": -lows["B"]}
    vals = {v: (base[slots[v][0][0]] + slots[v][0][1],
                base[slots[v][1][0]] + slots[v][1][1]) for v in range(1, n + 1)}
    bad = [v for v, (p, q) in vals.items() if min(p, q) != 0]
    if bad:
        raise EmbeddingFailure(
            f"no monomial placement of {bottom} in {top}|{bottom} has free cokernel "
            f"(pinched at vertices {sorted(bad)})")
    injection = {
        v: DVRMatrix([[ValPoly.monomial(1, p, N)], [ValPoly.monomial(1, q, N)]], N)
        for v, (p, q) in vals.items()
    }
    layered = build_layered([top, bottom], N)
    bot_rep = build_rank1(bottom, N)
    for v in range(1, n + 1):
        before = (v - 2) % n + 1
        lhs = layered.x[v] @ injection[before]
        rhs = injection[v] @ bot_rep.x[v]
        if lhs != rhs:
            raise EmbeddingFailure(f"embedding not equivariant at edge {v}")
    coker = _cokernel_rank1(layered, injection, vals)
    return EmbeddingResult(top, bottom, injection, vals, coker,
                           identify_rank1(coker))


def _cokernel_rank1(layered: CMModuleRep, injection: dict[int, DVRMatrix],
                    vals: dict[int, tuple[int, int]]) -> CMModuleRep:
    """Quotient of the two-layer module by a monomial column with a unit entry."""
    n, N = layered.n, layered.trunc
    # quotient basis: the coordinate complementary to a unit entry of the column
    keep = {v: (1 if vals[v][0] == 0 else 0) for v in vals}

    def project(v: int, vec_top: ValPoly, vec_bot: ValPoly) -> ValPoly:
        # reduce (a, b) modulo the column (t^p, t^q): eliminate the non-kept coord
        p, q = vals[v]
        if keep[v] == 1:  # unit in coordinate 0: b stays, a maps to -t^q * a
            return vec_bot - vec_top * ValPoly.monomial(1, q, N)
        return vec_top - vec_bot * ValPoly.monomial(1, p, N)

    x, y = {}, {}
    for v in range(1, n + 1):
        w = (v - 2) % n + 1
        col = layered.x[v].column(keep[w])
        x[v] = DVRMatrix([[project(v, col[0], col[1])]], N)
        col = layered.y[v].column(keep[v])
        y[v] = DVRMatrix([[project(w, col[0], col[1])]], N)
    return CMModuleRep(n, layered.k, 1, x, y, N)


def lattice_diagram_data(p: Profile, depth: int = 2) -> dict:
    """Column heights and rim polylines for the diagram emitters.

    Columns run 0..n left to right (0 and n identified up to the t-shift),
    leftmost labelled n.  A rim drops one unit at column i when i is in
    the layer and rises otherwise; successive layers are placed as high as
    possible below the previous one, touching without crossing.
    """
    n = p.n
    polylines = []
    prev: Optional[list[int]] = None
    for layer in p.layers:
        h = [0]
        for i in range(1, n + 1):
            h.append(h[-1] + (-1 if i in layer else 1))
        if prev is not None:
            delta = min(prev[i] - h[i] for i in range(n + 1))
            h = [v + delta for v in h]
        polylines.append(h)
        prev = h
    low = min(min(h) for h in polylines)
    polylines = [[v - low for v in h] for h in polylines]
    columns = []
    for i in range(n + 1):
        tops = [h[i] for h in polylines]
        columns.append({
            "column": i,
            "label": n if i == 0 else i,
            "tops": tops,
            "dots": sorted({t - 2 * d for t in tops for d in range(depth + 1)},
                           reverse=True),
        })
    return {
        "n": n,
        "k": p.k,
        "layers": [list(r.elements) for r in p.layers],
        "polylines": polylines,
        "columns": columns,
    }


def classify_module_root(p: Profile) -> str:
    """Root type of a two-layer profile: real, imaginary or not-a-root.

    Real means the multiplicity vector has quadratic form 2, which for
    three-interlacing pairs happens exactly when the layers share k - 3
    elements.
    """
    if len(p.layers) != 2:
        raise ValueError("root classification expects a two-layer profile")
    from .roots import classify_root_vector
    return classify_root_vector(a_vector(p))
