"""Candidate exceptional collections and their verification.

The collection consists of the bundles O_X x V(chi) for the highest weights
chi in the shifted barrel window, ordered by decreasing lambda0-weight.  A
pair (U_i, U_j) is checked in two independent ways:

* every torus weight of Hom(U_i, U_j) satisfies the local-cohomology
  vanishing inequality against the unstable locus, so morphisms on the
  semistable locus agree with equivariant morphisms on X;
* the equivariant morphism spaces on X, computed by the graded Hom oracle,
  vanish in the backward direction and are one-dimensional on the diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from barrelwin.errors import BudgetError
from barrelwin.group import (
    RepSpec,
    graded_hom_dims,
    hom_summands,
    irrep_weights,
    lowest_weight,
)
from barrelwin.lattice import ZERO, Vec2, as_vec, pair
from barrelwin.windows import WindowRegion, destab_data, enumerate_window_irreps

STRICT_PAIRING = "StrictPairing"
TIE_BREAK = "TieBreak"


@dataclass(frozen=True)
class CollectionEntry:
    label: Vec2
    lambda0_weight: Fraction
    order_index: int


@dataclass(frozen=True)
class VanishingCheckResult:
    chi: Vec2
    passes: bool
    failing_lambda: Vec2 | None = None
    failing_case: str | None = None


def build_collection(region: WindowRegion, require_generic: bool = True) -> list[CollectionEntry]:
    labels = enumerate_window_irreps(region, require_generic=require_generic)
    return entries_from_labels(region, labels)


def entries_from_labels(region: WindowRegion, labels) -> list[CollectionEntry]:
    return [
        CollectionEntry(chi, pair(region.lambda0, chi), i) for i, chi in enumerate(labels)
    ]


def vanishing_check(region: WindowRegion, chi: Vec2, cocharacters=None) -> VanishingCheckResult:
    """Test the vanishing inequality for one weight.

    For each lam in {0, +lambda', -lambda'} (or the given subset): either
    <lam, chi - zeta_lam> < 0, or it vanishes and <lambda0, chi - zeta_lam> < 0.
    Positive rescaling of lam does not change the condition, so these three
    cocharacters cover all of ell^perp.
    """
    chi = as_vec(chi)
    lams = cocharacters if cocharacters is not None else (ZERO, region.lambda_prime, -region.lambda_prime)
    for lam in lams:
        zeta = destab_data(region.rep, lam).zeta
        diff = chi - zeta
        p = pair(lam, diff)
        if p > 0:
            return VanishingCheckResult(chi, False, lam, STRICT_PAIRING)
        if p == 0 and pair(region.lambda0, diff) >= 0:
            return VanishingCheckResult(chi, False, lam, TIE_BREAK)
    return VanishingCheckResult(chi, True)


def hom_weights(rep: RepSpec, source: Vec2, target: Vec2) -> list[Vec2]:
    """Torus weights of Hom(V(source), V(target)), with multiplicity."""
    g = rep.group
    return [t - s for t in irrep_weights(g, target) for s in irrep_weights(g, source)]


def hom_vanishing_full(region: WindowRegion, source: Vec2, target: Vec2) -> VanishingCheckResult | None:
    """First failing weight of Hom(V(source), V(target)), or None."""
    for chi in sorted(set(hom_weights(region.rep, source, target))):
        res = vanishing_check(region, chi)
        if not res.passes:
            return res
    return None


def hom_vanishing_lowest(region: WindowRegion, source: Vec2, target: Vec2) -> VanishingCheckResult | None:
    """The same test using only lowest weights of the irreducible summands.

    For an irreducible of a connected group it suffices to test its lowest
    weight against the cocharacters pairing nonpositively with the positive
    root.  For the torus this is the full test.
    """
    group = region.rep.group
    if group.is_torus:
        return hom_vanishing_full(region, source, target)
    lams = [ZERO] + [
        lam for lam in (region.lambda_prime, -region.lambda_prime)
        if pair(lam, group.positive_roots[0]) <= 0
    ]
    for summand in hom_summands(group, source, target):
        res = vanishing_check(region, lowest_weight(group, summand), lams)
        if not res.passes:
            return res
    return None


@dataclass
class PairVerdict:
    i: int
    j: int
    vanishing_ok: bool
    shortcut_agrees: bool
    hom_dims: list[int] | None
    hom_ok: bool
    failing_weight: Vec2 | None = None

    @property
    def ok(self) -> bool:
        return self.vanishing_ok and self.shortcut_agrees and self.hom_ok


@dataclass
class StrongExceptionalReport:
    labels: list[Vec2]
    degree_budget: int
    pairs: list[PairVerdict] = field(default_factory=list)
    partial: bool = False

    @property
    def passes(self) -> bool:
        return not self.partial and all(p.ok for p in self.pairs)

    @property
    def failing_pairs(self) -> list[PairVerdict]:
        return [p for p in self.pairs if not p.ok]

    def matrix(self) -> list[str]:
        """One row per i; '.' for a passing pair and 'X' for a failing one."""
        n = len(self.labels)
        grid = [["."] * n for _ in range(n)]
        for p in self.pairs:
            if not p.ok:
                grid[p.i][p.j] = "X"
        return ["".join(row) for row in grid]


def verify_strong_exceptional(
    region: WindowRegion,
    labels,
    degree_budget: int = 16,
    degree_cap: int | None = None,
) -> StrongExceptionalReport:
    """Check every ordered pair of the collection; see the module docstring.

    For i < j the backward space Hom(U_j, U_i) must vanish in every degree
    up to the budget (its lambda0-weight is nonnegative and zero only in
    degree zero between equal labels).  The diagonal must be k in degree
    zero and vanish above.
    """
    labels = [as_vec(x) for x in labels]
    rep = region.rep
    cap = degree_cap if degree_cap is not None else max(degree_budget, 32)
    report = StrongExceptionalReport(labels, degree_budget)
    for i, u in enumerate(labels):
        for j, w in enumerate(labels):
            full = hom_vanishing_full(region, u, w)
            lowest = hom_vanishing_lowest(region, u, w)
            vanishing_ok = full is None
            shortcut_agrees = (full is None) == (lowest is None)
            dims = None
            hom_ok = True
            if i >= j:
                # Hom(U_i, U_j) with U_i later or equal: backward or diagonal.
                try:
                    dims = graded_hom_dims(rep, u, w, degree_budget, degree_cap=cap)
                except BudgetError:
                    report.partial = True
                    dims = None
                if dims is not None:
                    expected0 = 1 if i == j else 0
                    hom_ok = dims[0] == expected0 and all(d == 0 for d in dims[1:])
            report.pairs.append(
                PairVerdict(
                    i, j, vanishing_ok, shortcut_agrees, dims, hom_ok,
                    None if full is None else full.chi,
                )
            )
    return report
