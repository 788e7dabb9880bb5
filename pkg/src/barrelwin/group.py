"""Rank-two groups, their linear representations and a graded Hom oracle.

Two groups are supported: the split torus of rank two and GL2.  For GL2 we
use the diagonal maximal torus, the positive root (1,-1), and call a weight
(a,b) dominant when a >= b.  Representations of GL2 are given either by the
multiset of torus weights or by a decomposition into summands
Sym^n(k^2) tensor det^m.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from barrelwin.errors import BudgetError, InvalidLabelError
from barrelwin.lattice import (
    ZERO,
    Vec2,
    as_vec,
    pair,
    primitive,
    perp,
    vec,
    vsum,
    weyl_reflect,
)

TORUS_KIND = "Torus2"
GL2_KIND = "GL2"

#: Highest weights of irreducible representations are plain weights.
IrrepLabel = Vec2

DEFAULT_DEGREE_CAP = 32


@dataclass(frozen=True)
class GroupSpec:
    """A rank-two split reductive group with a fixed maximal torus."""

    kind: str
    positive_roots: tuple[Vec2, ...]
    rho: Vec2

    def __post_init__(self):
        if self.kind == TORUS_KIND:
            if self.positive_roots or not self.rho.is_zero:
                raise ValueError("a torus has no roots")
        elif self.kind == GL2_KIND:
            if self.positive_roots != (vec(1, -1),) or self.rho != vec(Fraction(1, 2), Fraction(-1, 2)):
                raise ValueError("GL2 is described by the positive root (1,-1)")
        else:
            raise ValueError(f"unknown group kind {self.kind!r}")

    @property
    def is_torus(self) -> bool:
        return self.kind == TORUS_KIND

    @property
    def roots(self) -> tuple[Vec2, ...]:
        return self.positive_roots + tuple(-r for r in self.positive_roots)

    def weyl_orbit(self, chi: Vec2) -> tuple[Vec2, ...]:
        if self.is_torus:
            return (chi,)
        w = weyl_reflect(chi)
        return (chi,) if w == chi else (chi, w)

    def is_dominant(self, chi: Vec2) -> bool:
        return self.is_torus or chi.a >= chi.b

    def is_central(self, lam: Vec2) -> bool:
        return self.is_torus or lam.a == lam.b

    def is_weyl_invariant(self, chi: Vec2) -> bool:
        return self.is_torus or chi.a == chi.b

    def __repr__(self) -> str:
        return self.kind


TORUS2 = GroupSpec(TORUS_KIND, (), ZERO)
GL2 = GroupSpec(GL2_KIND, (vec(1, -1),), vec(Fraction(1, 2), Fraction(-1, 2)))


def group_from_name(name: str) -> GroupSpec:
    key = name.strip().lower()
    if key in ("torus", "torus2", "t2"):
        return TORUS2
    if key in ("gl2", "gl(2)"):
        return GL2
    raise ValueError(f"unknown group {name!r}")


def gl2_summand_weights(n: int, m: int) -> list[Vec2]:
    """Torus weights of Sym^n(k^2) tensor det^m."""
    if n < 0:
        raise ValueError("symmetric power must be nonnegative")
    return [vec(n - k + m, k + m) for k in range(n + 1)]


@dataclass(frozen=True)
class RepSpec:
    """A linear representation, recorded by its multiset of torus weights."""

    group: GroupSpec
    weights: tuple[Vec2, ...]
    gl2_summands: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        ws = tuple(as_vec(w) for w in self.weights)
        for w in ws:
            if not w.is_integral:
                raise ValueError(f"weight {w} is not integral")
        object.__setattr__(self, "weights", ws)
        if self.gl2_summands is not None:
            if self.group.kind != GL2_KIND:
                raise ValueError("summand decomposition is only meaningful for GL2")
            expected = Counter(w for n, m in self.gl2_summands for w in gl2_summand_weights(n, m))
            if expected != Counter(ws):
                raise ValueError("weights disagree with the summand decomposition")
        if not self.group.is_torus:
            counts = Counter(ws)
            if counts != Counter(weyl_reflect(w) for w in ws):
                raise ValueError("GL2 weight multiset must be invariant under the swap")

    @classmethod
    def torus(cls, weights: Iterable) -> "RepSpec":
        return cls(TORUS2, tuple(as_vec(w) for w in weights))

    @classmethod
    def gl2(cls, summands: Iterable[tuple[int, int]]) -> "RepSpec":
        summands = tuple((int(n), int(m)) for n, m in summands)
        ws = tuple(w for n, m in summands for w in gl2_summand_weights(n, m))
        return cls(GL2, ws, summands)

    @classmethod
    def grassmannian(cls, n: int) -> "RepSpec":
        """Hom(k^n, k^2) with its GL2 action; the quotient is Gr(2, n)."""
        return cls.gl2([(1, 0)] * n)

    @property
    def dim(self) -> int:
        return len(self.weights)

    def weights_with(self, predicate) -> list[Vec2]:
        return [w for w in self.weights if predicate(w)]

    def describe(self) -> str:
        if self.gl2_summands is not None:
            parts = Counter(self.gl2_summands)
            return "GL2 " + " + ".join(
                f"{c}x(n={n},m={m})" for (n, m), c in sorted(parts.items())
            )
        parts = Counter(self.weights)
        return f"{self.group.kind} " + " + ".join(
            f"{c}x{w}" for w, c in sorted(parts.items())
        )


def anticanonical(rep: RepSpec) -> Vec2:
    """det(X) tensor det(g)^{-1}; the root sum vanishes for both groups."""
    return vsum(rep.weights) - vsum(rep.group.roots)


def _pairs_negatively(lam: Vec2, weights: Sequence[Vec2]) -> bool:
    return all(pair(lam, w) < 0 for w in weights)


def check_main_setup(rep: RepSpec) -> Vec2 | None:
    """A central cocharacter pairing strictly negatively with every weight.

    The search order is deterministic: (-1,-1) first; for GL2 that is the
    only normalization considered.  For the torus the eight primitive
    vectors of norm at most one in each coordinate are tried next, followed
    by an exact feasibility search on the open dual cone.
    """
    ws = list(rep.weights)
    first = vec(-1, -1)
    if _pairs_negatively(first, ws):
        return first
    if not rep.group.is_torus:
        return None
    small = [vec(x, y) for x in (-1, 0, 1) for y in (-1, 0, 1) if (x, y) != (0, 0)]
    for lam in small:
        if _pairs_negatively(lam, ws):
            return lam
    if not ws:
        return first
    # The open cone {lam : <lam, w> < 0 for all w} is bounded by rays among
    # the perpendiculars of the weights; sums of two boundary rays (or the
    # negative of a weight, when the cone is a half plane) are interior.
    rays = sorted({primitive(r) for w in ws if not w.is_zero for r in (perp(w), -perp(w), -w)})
    candidates = list(rays) + [u + v for u, v in combinations(rays, 2) if not (u + v).is_zero]
    for lam in sorted({primitive(c) for c in candidates}):
        if _pairs_negatively(lam, ws):
            return lam
    return None


def irrep_weights(group: GroupSpec, label: Vec2) -> list[Vec2]:
    """All torus weights of the irreducible with the given highest weight."""
    label = as_vec(label)
    if not label.is_integral:
        raise InvalidLabelError(f"label {label} is not integral")
    if group.is_torus:
        return [label]
    if label.a < label.b:
        raise InvalidLabelError(f"GL2 label {label} is not dominant")
    span = int(label.a - label.b)
    return [vec(label.a - k, label.b + k) for k in range(span + 1)]


def lowest_weight(group: GroupSpec, label: Vec2) -> Vec2:
    return label if group.is_torus else weyl_reflect(label)


def dual_label(group: GroupSpec, label: Vec2) -> Vec2:
    """Highest weight of the dual representation."""
    return -label if group.is_torus else vec(-label.b, -label.a)


def tensor_decompose(group: GroupSpec, u: Vec2, w: Vec2) -> list[Vec2]:
    """Highest weights (with multiplicity) of the irreducible summands of V(u) x V(w).

    For GL2 this is the Clebsch-Gordan rule.
    """
    if group.is_torus:
        return [u + w]
    k_max = int(min(u.a - u.b, w.a - w.b))
    return [vec(u.a + w.a - k, u.b + w.b + k) for k in range(k_max + 1)]


def hom_summands(group: GroupSpec, source: Vec2, target: Vec2) -> list[Vec2]:
    """Irreducible summands of Hom(V(source), V(target)) = V(target) x V(source)^*."""
    return tensor_decompose(group, target, dual_label(group, source))


def invariant_multiplicity(group: GroupSpec, mult: dict[Vec2, int]) -> int:
    """Dimension of invariants of a representation given by its weight multiplicities.

    Torus: the multiplicity of the zero weight.  GL2: with a single positive
    root the alternating sum over the Weyl group collapses to
    m(0,0) - m(1,-1).
    """
    m0 = mult.get(ZERO, 0)
    if group.is_torus:
        return m0
    return m0 - mult.get(vec(1, -1), 0)


@lru_cache(maxsize=64)
def _sym_table(counts: tuple[tuple[Vec2, int], ...], max_degree: int) -> tuple[dict, ...]:
    """Weight multiplicities of Sym^d of a representation, for d = 0..max_degree.

    ``counts`` lists each distinct weight with its multiplicity.  A weight w
    occurring k times contributes comb(j+k-1, k-1) monomials of degree j and
    weight j*w; the full table is the convolution over distinct weights.
    """
    table: list[dict[Vec2, int]] = [dict() for _ in range(max_degree + 1)]
    table[0][ZERO] = 1
    for w, k in counts:
        new: list[dict[Vec2, int]] = [dict() for _ in range(max_degree + 1)]
        for d in range(max_degree + 1):
            for wt, c in table[d].items():
                for j in range(max_degree - d + 1):
                    key = wt + j * w
                    new[d + j][key] = new[d + j].get(key, 0) + c * comb(j + k - 1, k - 1)
        table = new
    return tuple(table)


def sym_power_weights(weights: Sequence[Vec2], max_degree: int) -> tuple[dict, ...]:
    counts = tuple(sorted(Counter(weights).items()))
    return _sym_table(counts, max_degree)


def graded_hom_dims(
    rep: RepSpec,
    source: Vec2,
    target: Vec2,
    max_degree: int,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> list[int]:
    """dim (Sym^d(X^*) x V(target) x V(source)^*)^G for d = 0..max_degree.

    This is the degree-d part of the morphism space from O_X x V(source) to
    O_X x V(target) in the equivariant category of X.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    if max_degree > degree_cap:
        raise BudgetError(f"degree {max_degree} exceeds the degree budget {degree_cap}")
    group = rep.group
    w_target = irrep_weights(group, target)
    w_source_dual = [-w for w in irrep_weights(group, source)]
    twist = Counter(x + y for x in w_target for y in w_source_dual)
    sym = sym_power_weights([-b for b in rep.weights], max_degree)
    probes = [ZERO] if group.is_torus else [ZERO, vec(1, -1)]
    out = []
    for d in range(max_degree + 1):
        mult = {}
        for p in probes:
            mult[p] = sum(c * sym[d].get(p - t, 0) for t, c in twist.items())
        out.append(invariant_multiplicity(group, mult))
    return out
