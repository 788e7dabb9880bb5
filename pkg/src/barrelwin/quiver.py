"""Decorated quivers and product exceptional collections.

A decorated quiver here is an acyclic quiver whose vertices are numbered in
topological order, each carrying GL(v_i) acting on V_i = k^{v_i} and a
framing w_i.  The representation space at vertex i is V_i^{n_i} with

    n_i = w_i + sum over arrows s -> i of v_s,

and the quotient is an iterated bundle of Grassmannian-type quotients.  The
GIT parameter is the lexicographic combination of the vertex parameters, so
cocharacters of G_Q pair with it through the sign of the first nonzero
vertex pairing.

Only GL(2) vertices feed the rank-two window machinery.  Other ranks are
accepted with trusted collections and for point-level checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from barrelwin.errors import HypothesisError
from barrelwin.group import RepSpec
from barrelwin.lattice import Vec2, as_fraction, as_vec, pair
from barrelwin.stability import finite_stabilizer_test, lex_sign

AUTO = "auto"
TRUSTED = "trusted"


@dataclass
class QuiverVertex:
    """GL(rank) acting on k^rank with framing ``framing``.

    ``det_power`` is the GIT parameter as a power of the determinant; it must
    be positive so that semistability is the surjectivity condition.
    ``collection`` is either computed (source ``auto``, GL(2) only) or
    supplied by the caller (source ``trusted``).
    """

    rank: int
    framing: int
    det_power: Fraction = Fraction(1)
    collection_source: str = AUTO
    collection: list | None = None

    def __post_init__(self):
        self.det_power = as_fraction(self.det_power)
        if self.rank < 1 or self.framing < 0:
            raise ValueError("vertex rank must be positive and framing nonnegative")
        if self.collection_source not in (AUTO, TRUSTED):
            raise ValueError(f"unknown collection source {self.collection_source!r}")
        if self.collection_source == TRUSTED and self.collection is None:
            raise ValueError("a trusted collection must be supplied explicitly")

    @property
    def ell(self) -> Vec2:
        """The vertex parameter as a GL(2) weight (only meaningful for rank two)."""
        return Vec2(self.det_power, self.det_power)


@dataclass
class DecoratedQuiver:
    vertices: list[QuiverVertex]
    arrows: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        n = len(self.vertices)
        for s, t in self.arrows:
            if not (0 <= s < n and 0 <= t < n):
                raise ValueError(f"arrow {s}->{t} refers to a missing vertex")
            if not s < t:
                # Topological numbering also rules out oriented cycles.
                raise HypothesisError("topological-order", f"arrow {s}->{t} must point to a later vertex")

    def incoming(self, i: int) -> list[int]:
        return [s for s, t in self.arrows if t == i]


def vertex_multiplicity(q: DecoratedQuiver, i: int) -> int:
    if not 0 <= i < len(q.vertices):
        raise IndexError(i)
    return q.vertices[i].framing + sum(q.vertices[s].rank for s in q.incoming(i))


def vertex_rep(q: DecoratedQuiver, i: int) -> RepSpec:
    """The GL(2) representation V_i^{n_i}; refuses other ranks and empty reps."""
    v = q.vertices[i]
    if v.rank != 2:
        raise HypothesisError("vertex-rank", f"vertex {i} has rank {v.rank}; only GL(2) is analyzed")
    n = vertex_multiplicity(q, i)
    if n == 0:
        raise HypothesisError("main-setup", f"vertex {i} has an empty representation")
    return RepSpec.grassmannian(n)


def vertex_stability_checks(q: DecoratedQuiver) -> list[dict]:
    """Finite-stabilizer verdict per vertex, or an explicit unchecked marker."""
    out = []
    for i, v in enumerate(q.vertices):
        if v.rank == 2:
            verdict = finite_stabilizer_test(vertex_rep(q, i), v.ell)
            out.append({"vertex": i, "checked": True, "finite_stabilizers": verdict.finite_stabilizers})
        else:
            out.append({"vertex": i, "checked": False, "finite_stabilizers": None})
    return out


def vertex_collection(q: DecoratedQuiver, i: int) -> list:
    v = q.vertices[i]
    if v.collection_source == TRUSTED:
        return list(v.collection)
    from barrelwin.windows import enumerate_window_irreps, find_generic_theta, make_window

    rep = vertex_rep(q, i)
    theta = find_generic_theta(rep, v.ell)
    return enumerate_window_irreps(make_window(rep, ell=v.ell, theta=theta))


def reverse_lex_key(index: Sequence[int]) -> tuple:
    """Reverse lexicographic order: compare the last coordinate first."""
    return tuple(reversed(tuple(index)))


@dataclass
class ProductCollection:
    entries: list[tuple[int, ...]]
    vertex_collections: list[list]

    def __len__(self) -> int:
        return len(self.entries)

    def labels(self) -> list[tuple]:
        return [
            tuple(self.vertex_collections[k][j] for k, j in enumerate(entry))
            for entry in self.entries
        ]


def compose_collections(q: DecoratedQuiver, collections: list[list] | None = None) -> ProductCollection:
    cols = collections if collections is not None else [vertex_collection(q, i) for i in range(len(q.vertices))]
    if len(cols) != len(q.vertices):
        raise ValueError("one collection per vertex is required")
    entries = sorted(product(*(range(len(c)) for c in cols)), key=reverse_lex_key)
    return ProductCollection(entries, [list(c) for c in cols])


@dataclass(frozen=True)
class LexParameter:
    """The parameter a_1 ell_1 + ... + a_N ell_N with a_N << ... << a_1."""

    ells: tuple[Vec2, ...]

    def pairings(self, cocharacters: Sequence[Vec2]) -> list[Fraction]:
        if len(cocharacters) != len(self.ells):
            raise ValueError("one cocharacter per vertex is required")
        return [pair(as_vec(lam), ell) for lam, ell in zip(cocharacters, self.ells)]

    def sign(self, cocharacters: Sequence[Vec2]) -> int:
        return lex_sign(self.pairings(cocharacters))

    def materialize(self, M) -> Vec2 | list[Vec2]:
        """Concrete coefficients a_i = M^(N-i), returned as scaled vertex parameters."""
        N = len(self.ells)
        return [ell * (Fraction(M) ** (N - 1 - k)) for k, ell in enumerate(self.ells)]

    def concrete_sign(self, cocharacters: Sequence[Vec2], M) -> int:
        total = sum(pair(as_vec(lam), ell) for lam, ell in zip(cocharacters, self.materialize(M)))
        return (total > 0) - (total < 0)


def materialization_bound(pairings: Sequence[Fraction]) -> int:
    """An integer M above which sum M^(N-i) p_i has the lexicographic sign of p."""
    nonzero = [abs(p) for p in pairings if p != 0]
    if not nonzero:
        return 2
    return int(sum(nonzero) / min(nonzero)) + 1


def lex_git_parameter(q: DecoratedQuiver) -> LexParameter:
    return LexParameter(tuple(v.ell for v in q.vertices))


# --- point-level semistability ---------------------------------------------

Matrix = list[list[Fraction]]


def matrix_rank(rows: Matrix) -> int:
    """Rank over Q by fraction-exact Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m or not m[0]:
        return 0
    rank, ncols = 0, len(m[0])
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(rank + 1, len(m)):
            if m[r][c]:
                f = m[r][c] / m[rank][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


@dataclass
class QuiverPoint:
    """Linear maps: ``framings[i]`` is rank_i x w_i, ``arrow_maps[k]`` is rank_t x rank_s."""

    framings: list[Matrix]
    arrow_maps: list[Matrix]


@dataclass(frozen=True)
class VertexVerdict:
    vertex: int
    rank: int
    required: int

    @property
    def semistable(self) -> bool:
        return self.rank == self.required


@dataclass
class PointVerdict:
    semistable: bool
    vertices: list[VertexVerdict]


def _shape_ok(mat: Matrix, rows: int, cols: int) -> bool:
    if rows == 0:
        return len(mat) == 0
    return len(mat) == rows and all(len(r) == cols for r in mat)


def combined_map(q: DecoratedQuiver, point: QuiverPoint, i: int) -> Matrix:
    """[framing | incoming arrow maps] as a rank_i x n_i matrix."""
    v = q.vertices[i]
    blocks = [point.framings[i]]
    for k, (s, t) in enumerate(q.arrows):
        if t == i:
            blocks.append(point.arrow_maps[k])
    return [[x for block in blocks for x in block[r]] for r in range(v.rank)]


def quiver_point_semistable(q: DecoratedQuiver, point: QuiverPoint) -> PointVerdict:
    """Surjectivity of every combined vertex map.

    With a positive determinant parameter at a GL vertex, the image of the
    point at that vertex is semistable exactly when the map from
    k^{w_i} + sum V_s to V_i has full rank.
    """
    if len(point.framings) != len(q.vertices) or len(point.arrow_maps) != len(q.arrows):
        raise ValueError("point data does not match the quiver")
    verdicts = []
    for i, v in enumerate(q.vertices):
        if v.det_power <= 0:
            raise HypothesisError("polarization", f"vertex {i} needs a positive determinant parameter")
        if not _shape_ok(point.framings[i], v.rank, v.framing):
            raise ValueError(f"framing map at vertex {i} has the wrong shape")
        for k, (s, t) in enumerate(q.arrows):
            if t == i and not _shape_ok(point.arrow_maps[k], v.rank, q.vertices[s].rank):
                raise ValueError(f"arrow map {s}->{t} has the wrong shape")
        verdicts.append(VertexVerdict(i, matrix_rank(combined_map(q, point, i)), v.rank))
    return PointVerdict(all(x.semistable for x in verdicts), verdicts)


def act_on_point(q: DecoratedQuiver, point: QuiverPoint, g: list[Matrix], g_inv: list[Matrix]) -> QuiverPoint:
    """Base change by g_i at each vertex: F_i -> g_i F_i and A -> g_t A g_s^{-1}."""

    def mul(a: Matrix, b: Matrix) -> Matrix:
        if not a or not b:
            return [[Fraction(0)] * (len(b[0]) if b else 0) for _ in a]
        return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]

    frames = [mul(g[i], f) if f and f[0] else f for i, f in enumerate(point.framings)]
    arrows = [mul(mul(g[t], a), g_inv[s]) for (s, t), a in zip(q.arrows, point.arrow_maps)]
    return QuiverPoint(frames, arrows)
